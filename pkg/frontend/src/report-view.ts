/**
 * Learning report: one bar pair per evaluation, drawn straight from
 * GET /api/report (the chart never aggregates or filters on its own).
 * Blue bar: the position the result had when it was evaluated. Green bar:
 * how the position changed after retraining (downward = moved up the list).
 */

import { ApiClient, ReportResponse } from "./api.js";
import { clear, el, svgEl } from "./dom.js";

const BAR_WIDTH = 10;
const GROUP_GAP = 8;
const CHART_HEIGHT = 220;
const BASELINE = 110;

export class ReportView {
  readonly root: HTMLElement;

  constructor(private readonly api: ApiClient) {
    this.root = el("section", { class: "report-view" });
  }

  async show(): Promise<void> {
    clear(this.root);
    const report = await this.api.report();
    this.root.append(
      el("h2", {}, ["Position changes per evaluation"]),
      el("p", { class: "aggregate" }, [
        `evaluations: ${report.aggregate.count}, total change: ${report.aggregate.total_delta}, ` +
          `mean improvement: ${report.aggregate.mean_improvement.toFixed(3)}`,
      ]),
    );
    if (report.rows.length === 0) {
      this.root.append(el("p", { class: "empty" }, ["No evaluations yet."]));
      return;
    }
    this.root.append(this.chart(report));
  }

  private chart(report: ReportResponse): SVGElement {
    const maxBefore = Math.max(...report.rows.map((r) => r.p_before), 1);
    const maxDelta = Math.max(...report.rows.map((r) => Math.abs(r.delta)), 1);
    const groupWidth = 2 * BAR_WIDTH + GROUP_GAP;
    const width = report.rows.length * groupWidth + GROUP_GAP;

    const svg = svgEl("svg", {
      class: "report-chart",
      viewBox: `0 0 ${width} ${CHART_HEIGHT}`,
      width: String(width),
      height: String(CHART_HEIGHT),
      role: "img",
    });
    svg.appendChild(
      svgEl("line", {
        x1: "0",
        x2: String(width),
        y1: String(BASELINE),
        y2: String(BASELINE),
        class: "baseline",
        stroke: "#999",
      }),
    );

    report.rows.forEach((row, i) => {
      const x = GROUP_GAP + i * groupWidth;
      const group = svgEl("g", {
        class: "evaluation-bars",
        "data-evaluation-id": String(row.evaluation_id),
        "data-p-before": String(row.p_before),
        "data-delta": String(row.delta),
      });

      const beforeHeight = (row.p_before / maxBefore) * (BASELINE - 10);
      group.appendChild(
        svgEl("rect", {
          class: "bar-before",
          x: String(x),
          y: String(BASELINE - beforeHeight),
          width: String(BAR_WIDTH),
          height: String(beforeHeight),
          fill: "#3b6fb6",
        }),
      );

      const deltaHeight = (Math.abs(row.delta) / maxDelta) * (BASELINE - 10);
      // improvement (negative delta) points up, worsening points down
      const y = row.delta <= 0 ? BASELINE - deltaHeight : BASELINE;
      group.appendChild(
        svgEl("rect", {
          class: "bar-delta",
          x: String(x + BAR_WIDTH + 2),
          y: String(y),
          width: String(BAR_WIDTH),
          height: String(deltaHeight),
          fill: "#3f9c54",
        }),
      );

      svg.appendChild(group);
    });
    return svg;
  }
}
