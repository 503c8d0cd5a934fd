/**
 * Full-document page with the evaluation control.
 *
 * The whole body is always rendered (never a snippet): the feedback loop's
 * premise is that usefulness is judged after reading the document, not its
 * preview. The "useful" control appears only when the server confirms the
 * evaluation context (eligible query, position matching the logged result
 * list), and a client-side guard blocks accidental double submission even
 * though the server accepts repeats.
 */

import { ApiClient, ApiError, DocumentResponse, EvaluateResponse } from "./api.js";
import { clear, el } from "./dom.js";

export class DocView {
  readonly root: HTMLElement;
  private submitted = false;

  constructor(
    private readonly api: ApiClient,
    private readonly user: string,
  ) {
    this.root = el("section", { class: "doc-view" });
  }

  async show(docId: number, queryId?: number, position?: number): Promise<void> {
    clear(this.root);
    this.submitted = false;
    let doc: DocumentResponse;
    try {
      doc = await this.api.document(docId, queryId, position);
    } catch (error) {
      if (error instanceof ApiError) {
        this.root.append(el("p", { class: "error" }, [error.message]));
        return;
      }
      throw error;
    }

    this.root.append(
      el("header", { class: "doc-header" }, [
        el("h2", {}, [doc.name]),
        el("p", { class: "doc-folder" }, [doc.folder || "(no folder)"]),
      ]),
      el("article", { class: "doc-body" }, [doc.body]),
    );

    const ctx = doc.evaluation_context;
    if (ctx.can_evaluate && ctx.query_id !== null && ctx.position !== null) {
      this.root.append(this.evaluationControl(doc.doc_id, ctx.query_id, ctx.position));
    }
  }

  private evaluationControl(docId: number, queryId: number, position: number): HTMLElement {
    const outcome = el("div", { class: "evaluation-outcome" });
    const button = el(
      "button",
      {
        class: "evaluate-button",
        "data-query-id": String(queryId),
        "data-position": String(position),
        onclick: async () => {
          if (this.submitted) return; // double-click guard
          this.submitted = true;
          button.disabled = true;
          try {
            const result = await this.api.evaluate(queryId, docId, position, this.user);
            this.renderOutcome(outcome, result);
          } catch (error) {
            if (error instanceof ApiError) {
              outcome.append(el("p", { class: "error" }, [error.message]));
              return;
            }
            throw error;
          }
        },
      },
      ["This document was useful"],
    );
    return el("div", { class: "evaluation-control" }, [button, outcome]);
  }

  private renderOutcome(box: HTMLElement, result: EvaluateResponse): void {
    const rows = result.updated_words.map((w) =>
      el("tr", {}, [
        el("td", {}, [w.word]),
        el("td", {}, [w.old_weight.toFixed(4)]),
        el("td", {}, [w.new_weight.toFixed(4)]),
      ]),
    );
    box.append(
      el("div", { class: "confirmation", "data-delta": String(result.delta) }, [
        el("p", {}, [
          `Thanks! Position ${result.p_before} → ${result.p_after} ` +
            `(change ${result.delta > 0 ? "+" : ""}${result.delta}).`,
        ]),
        el("table", { class: "updated-words" }, [
          el("thead", {}, [
            el("tr", {}, [
              el("th", {}, ["word"]),
              el("th", {}, ["old weight"]),
              el("th", {}, ["new weight"]),
            ]),
          ]),
          el("tbody", {}, rows),
        ]),
      ]),
    );
  }
}
