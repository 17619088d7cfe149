// Entry point: wires the hash router to the render functions.

import { ApiClient, ApiFailure } from "./api.js";
import { formatRoute, parseRoute } from "./router.js";
import {
  renderApiError,
  renderBrowsePage,
  renderEntityPage,
  renderExpertsPage,
  renderNotFound,
  renderSearchPage,
  renderThemeTree,
} from "./render.js";
import type { SearchPayload } from "./types.js";

const api = new ApiClient("");
const app = document.getElementById("app") as HTMLElement;

// Last successful search results, kept on screen when a newer query has a
// syntax error so the user can fix the query without losing context.
let lastSearch: SearchPayload | null = null;

// Monotonic counter so a slow response for an old route never overwrites
// the view of a newer one.
let requestSeq = 0;

async function renderRoute(): Promise<void> {
  const seq = ++requestSeq;
  const route = parseRoute(window.location.hash);
  let html: string;
  try {
    switch (route.kind) {
      case "entity": {
        const entity = await api.entity(route.id);
        html = renderEntityPage(entity);
        break;
      }
      case "browse": {
        const page = await api.browse(route.entityKind, route.filters);
        html = renderBrowsePage(route.entityKind, route.filters, page);
        break;
      }
      case "theme_tree": {
        html = renderThemeTree(await api.themeTree());
        break;
      }
      case "search": {
        if (!route.q) {
          html = renderSearchPage("", null, null, lastSearch);
          break;
        }
        try {
          const result = await api.search(route.q);
          lastSearch = result;
          html = renderSearchPage(route.q, result, null);
        } catch (err) {
          if (err instanceof ApiFailure && err.status === 400) {
            const position = (err.body.detail as { position?: number } | null)?.position;
            html = renderSearchPage(
              route.q,
              null,
              { message: err.body.message, position },
              lastSearch,
            );
          } else {
            throw err;
          }
        }
        break;
      }
      case "experts": {
        const data = route.q ? await api.experts(route.q, route.k) : null;
        html = renderExpertsPage(route.q, route.k, data);
        break;
      }
    }
  } catch (err) {
    if (err instanceof ApiFailure && err.status === 404 && route.kind === "entity") {
      html = renderNotFound(route.id);
    } else {
      html = renderApiError(err instanceof Error ? err.message : String(err));
    }
  }
  if (seq === requestSeq) {
    app.innerHTML = html;
  }
}

function onSubmit(event: Event): void {
  const form = event.target as HTMLFormElement;
  if (!form.id) {
    return;
  }
  event.preventDefault();
  const data = new FormData(form);
  if (form.id === "search-form") {
    window.location.hash = formatRoute({ kind: "search", q: String(data.get("q") ?? "") });
  } else if (form.id === "experts-form") {
    window.location.hash = formatRoute({
      kind: "experts",
      q: String(data.get("q") ?? ""),
      k: Number(data.get("k") ?? "10") || 10,
    });
  } else if (form.id === "filter-form") {
    const route = parseRoute(window.location.hash);
    if (route.kind !== "browse") {
      return;
    }
    const filters: Record<string, string> = {};
    data.forEach((value, key) => {
      if (String(value).trim() !== "") {
        filters[key] = String(value);
      }
    });
    window.location.hash = formatRoute({
      kind: "browse",
      entityKind: route.entityKind,
      filters,
    });
    if (formatRoute({ kind: "browse", entityKind: route.entityKind, filters }) === window.location.hash) {
      void renderRoute();
    }
  }
}

app.addEventListener("submit", onSubmit);
window.addEventListener("hashchange", () => void renderRoute());
void renderRoute();
