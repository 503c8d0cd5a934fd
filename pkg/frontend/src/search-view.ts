/**
 * Search form and result list.
 *
 * The three section checkboxes mirror the per-query section flags: unchecked
 * means the section does not participate in scoring. Result rows carry the
 * position badge the ranking assigned; opening a row hands (query_id,
 * position) to the document view so a later evaluation refers to exactly
 * this search.
 */

import { ApiClient, ApiError, SearchResponse, SearchResultRow } from "./api.js";
import { clear, el } from "./dom.js";

export interface OpenDocumentRequest {
  docId: number;
  queryId: number;
  position: number;
}

export class SearchView {
  readonly root: HTMLElement;
  private readonly resultsBox: HTMLElement;
  private readonly notice: HTMLElement;
  private lastResponse: SearchResponse | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly user: string,
    private readonly onOpen: (req: OpenDocumentRequest) => void,
  ) {
    this.notice = el("p", { class: "notice", role: "status" });
    this.resultsBox = el("div", { class: "results" });
    this.root = el("section", { class: "search-view" }, [
      el("form", { class: "search-form", onsubmit: (e) => this.submit(e) }, [
        el("input", {
          type: "search",
          name: "q",
          placeholder: "search words…",
          "aria-label": "search words",
        }),
        this.sectionToggle("folder", true),
        this.sectionToggle("name", true),
        this.sectionToggle("body", true),
        el("button", { type: "submit" }, ["Search"]),
      ]),
      this.notice,
      this.resultsBox,
    ]);
  }

  private sectionToggle(section: string, checked: boolean): HTMLElement {
    return el("label", { class: "section-toggle" }, [
      el("input", { type: "checkbox", name: `section-${section}`, checked }),
      section,
    ]);
  }

  private async submit(event: Event): Promise<void> {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const q = (form.elements.namedItem("q") as HTMLInputElement).value;
    const flag = (name: string) =>
      (form.elements.namedItem(`section-${name}`) as HTMLInputElement).checked;
    this.notice.textContent = "";
    try {
      const response = await this.api.search(
        q,
        { folder: flag("folder"), name: flag("name"), body: flag("body") },
        this.user,
      );
      this.lastResponse = response;
      this.render(response);
    } catch (error) {
      if (error instanceof ApiError) {
        this.notice.textContent = error.message;
        clear(this.resultsBox);
        return;
      }
      throw error;
    }
  }

  private render(response: SearchResponse): void {
    clear(this.resultsBox);
    if (!response.eligible_for_evaluation) {
      this.notice.textContent =
        "Single-word query: results can be read but not evaluated (one word shifts every result equally).";
    }
    if (response.results.length === 0) {
      this.resultsBox.append(el("p", { class: "empty" }, ["No matching documents."]));
      return;
    }
    const list = el("ol", { class: "result-list" });
    for (const row of response.results) {
      list.append(this.resultRow(response, row));
    }
    this.resultsBox.append(list);
  }

  private resultRow(response: SearchResponse, row: SearchResultRow): HTMLElement {
    const open = () =>
      this.onOpen({ docId: row.doc_id, queryId: response.query_id, position: row.position });
    return el(
      "li",
      {
        class: "result-row",
        "data-doc-id": String(row.doc_id),
        "data-position": String(row.position),
      },
      [
        el("span", { class: "position-badge" }, [String(row.position)]),
        el("a", { href: "#", class: "result-link", onclick: (e) => (e.preventDefault(), open()) }, [
          row.name,
        ]),
        el("span", { class: "result-folder" }, [row.folder]),
        el("span", { class: "result-score" }, [row.score.toFixed(3)]),
      ],
    );
  }
}
