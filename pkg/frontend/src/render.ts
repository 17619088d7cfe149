// Pure view functions: API payloads in, HTML strings out. No re-ranking,
// re-filtering, or re-scoring happens here; rendered order is API order.

import type {
  BrowsePayload,
  EntityPayload,
  ExpertsPayload,
  SearchPayload,
  Summary,
  ThemeNode,
  TreePayload,
} from "./types.js";

const KINDS = ["staff", "project", "output", "unit", "theme"];

const PANEL_LABELS: Record<string, string> = {
  "contributes_to:outgoing": "Contributes to projects",
  "contributes_to:incoming": "Contributors",
  "authored:outgoing": "Authored outputs",
  "authored:incoming": "Authors",
  "produced_by:outgoing": "Produced for projects",
  "produced_by:incoming": "Outputs",
  "member_of:outgoing": "Member of units",
  "member_of:incoming": "Members",
  "tasked_to:outgoing": "Tasked to units",
  "tasked_to:incoming": "Tasked projects",
  "tagged:outgoing": "Themes",
  "tagged:incoming": "Tagged entities",
  "related_to:outgoing": "Related projects",
  "related_to:incoming": "Related from projects",
};

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function entityLink(id: string, title: string): string {
  return `<a class="entity-link" href="#/entities/${encodeURIComponent(id)}">${escapeHtml(title)}</a>`;
}

function summaryList(items: Summary[]): string {
  if (items.length === 0) {
    return `<p class="empty">none</p>`;
  }
  const rows = items.map(
    (item) =>
      `<li><span class="badge">${item.kind}</span> ${entityLink(item.id, item.title)}</li>`,
  );
  return `<ul>${rows.join("")}</ul>`;
}

export function renderNav(): string {
  const browse = KINDS.map(
    (kind) => `<a href="#/browse/${kind}">${kind}</a>`,
  ).join(" ");
  return `<nav>${browse} <a href="#/themes">theme tree</a> <a href="#/search">search</a> <a href="#/experts">experts</a></nav>`;
}

function looksLikeEntityId(value: unknown): value is string {
  return typeof value === "string" && /^(staff|project|output|unit|theme):\S+$/.test(value);
}

export function renderEntityPage(entity: EntityPayload): string {
  const fieldRows = Object.entries(entity.fields)
    .map(([name, value]) => {
      const rendered = looksLikeEntityId(value)
        ? entityLink(value, value)
        : escapeHtml(typeof value === "string" ? value : JSON.stringify(value));
      return `<tr><th>${escapeHtml(name)}</th><td>${rendered}</td></tr>`;
    })
    .join("");
  const panels = Object.entries(entity.panels)
    .map(
      ([key, members]) =>
        `<section class="panel" data-panel="${key}"><h3>${escapeHtml(
          PANEL_LABELS[key] ?? key,
        )}</h3>${summaryList(members)}</section>`,
    )
    .join("");
  let extras = "";
  if (entity.expertise && entity.expertise.length > 0) {
    const terms = entity.expertise
      .map((t) => `<li>${escapeHtml(t.term)} <small>${t.weight.toFixed(3)}</small></li>`)
      .join("");
    extras += `<section class="expertise"><h3>Derived expertise</h3><ol>${terms}</ol></section>`;
  }
  if (entity.aggregate) {
    extras += `<section class="aggregate"><h3>Everything under this theme</h3>
      <h4>Staff</h4>${summaryList(entity.aggregate.staff.map(asSummary))}
      <h4>Projects</h4>${summaryList(entity.aggregate.projects.map(asSummary))}
      <h4>Outputs</h4>${summaryList(entity.aggregate.outputs.map(asSummary))}</section>`;
  }
  return `${renderNav()}<article class="entity" data-id="${escapeHtml(entity.id)}">
    <h2><span class="badge">${entity.kind}</span> ${escapeHtml(entity.title)}</h2>
    <table class="fields">${fieldRows}</table>
    ${panels}${extras}</article>`;
}

function asSummary(id: string): Summary {
  return { id, kind: id.split(":", 1)[0] as Summary["kind"], title: id };
}

export function renderBrowsePage(
  kind: string,
  filters: Record<string, string>,
  data: BrowsePayload,
): string {
  const filterFields = ["unit", "site", "status", "type", "theme", "year"]
    .map(
      (name) =>
        `<label>${name} <input name="${name}" value="${escapeHtml(filters[name] ?? "")}"></label>`,
    )
    .join(" ");
  return `${renderNav()}<section class="browse" data-kind="${kind}">
    <h2>Browse ${kind}</h2>
    <form id="filter-form">${filterFields}<button type="submit">Filter</button></form>
    <p class="total">${data.total} result(s)</p>
    ${summaryList(data.items)}</section>`;
}

export function renderSearchPage(
  q: string,
  result: SearchPayload | null,
  error: { message: string; position?: number } | null,
  previous: SearchPayload | null = null,
): string {
  const form = `<form id="search-form">
    <input id="search-input" name="q" value="${escapeHtml(q)}" placeholder="radar AND unit:&quot;Division A&quot;">
    <button type="submit">Search</button></form>`;
  let body = "";
  if (error) {
    const where = error.position !== undefined ? ` (position ${error.position})` : "";
    body += `<p class="error" role="alert">${escapeHtml(error.message)}${where}</p>`;
  }
  const shown = result ?? previous;
  if (shown) {
    const rows = shown.hits
      .map(
        (hit) =>
          `<li><span class="badge">${hit.kind}</span> ${entityLink(hit.id, hit.title)} <small class="score">${hit.score.toFixed(4)}</small></li>`,
      )
      .join("");
    body += `<p class="echo">Query: <code>${escapeHtml(shown.query)}</code> — ${shown.total} hit(s)</p><ol class="hits">${rows}</ol>`;
  } else if (!error) {
    body += `<p class="prompt">Enter a query: terms, field:value, theme:path, AND/OR.</p>`;
  }
  return `${renderNav()}<section class="search"><h2>Search</h2>${form}${body}</section>`;
}

function themeNode(node: ThemeNode): string {
  const children = node.children.length
    ? `<ul>${node.children.map(themeNode).join("")}</ul>`
    : "";
  return `<li>${entityLink(node.id, node.label)}${children}</li>`;
}

export function renderThemeTree(tree: TreePayload): string {
  const facets = Object.entries(tree.facets)
    .map(
      ([facet, roots]) =>
        `<section class="facet"><h3>${escapeHtml(facet)}</h3><ul>${roots.map(themeNode).join("")}</ul></section>`,
    )
    .join("");
  return `${renderNav()}<section class="themes"><h2>Themes</h2>${facets}</section>`;
}

export function renderExpertsPage(q: string, k: number, data: ExpertsPayload | null): string {
  const form = `<form id="experts-form">
    <input name="q" value="${escapeHtml(q)}" placeholder="skills or topic terms">
    <input name="k" type="number" value="${k}" min="1">
    <button type="submit">Find experts</button></form>`;
  let body = "";
  if (data) {
    const rows = data.experts
      .map(
        (e) =>
          `<li>${entityLink(e.id, e.title)} <small class="score">${e.score.toFixed(4)}</small></li>`,
      )
      .join("");
    body = `<ol class="experts">${rows}</ol>`;
  }
  return `${renderNav()}<section class="experts"><h2>Find experts</h2>${form}${body}</section>`;
}

export function renderNotFound(id: string): string {
  return `${renderNav()}<section class="not-found"><h2>Not found</h2><p>No entity ${escapeHtml(id)}.</p></section>`;
}

export function renderApiError(message: string): string {
  return `${renderNav()}<section class="api-error"><p class="error" role="alert">${escapeHtml(message)}</p></section>`;
}
