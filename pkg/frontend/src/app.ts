/** Wires the three views into a single-page app with a nav bar. */

import { ApiClient } from "./api.js";
import { DocView } from "./doc-view.js";
import { clear, el } from "./dom.js";
import { ReportView } from "./report-view.js";
import { OpenDocumentRequest, SearchView } from "./search-view.js";

export class App {
  private readonly api: ApiClient;
  private readonly searchView: SearchView;
  private readonly docView: DocView;
  private readonly reportView: ReportView;
  private readonly content: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    options: { user?: string; apiBase?: string } = {},
  ) {
    const user = options.user ?? "browser";
    this.api = new ApiClient(options.apiBase ?? "");
    this.searchView = new SearchView(this.api, user, (req) => void this.openDocument(req));
    this.docView = new DocView(this.api, user);
    this.reportView = new ReportView(this.api);
    this.content = el("main", { class: "content" });
  }

  mount(): void {
    clear(this.root);
    this.root.append(
      el("nav", { class: "topnav" }, [
        el("button", { class: "nav-search", onclick: () => this.showSearch() }, ["Search"]),
        el("button", { class: "nav-report", onclick: () => void this.showReport() }, ["Report"]),
      ]),
      this.content,
    );
    this.showSearch();
  }

  showSearch(): void {
    clear(this.content);
    this.content.append(this.searchView.root);
  }

  async openDocument(req: OpenDocumentRequest): Promise<void> {
    clear(this.content);
    this.content.append(this.docView.root);
    await this.docView.show(req.docId, req.queryId, req.position);
  }

  async showReport(): Promise<void> {
    clear(this.content);
    this.content.append(this.reportView.root);
    await this.reportView.show();
  }
}
