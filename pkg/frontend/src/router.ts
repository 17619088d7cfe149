// Hash-based routes; every view state is URL-addressable.

export type Route =
  | { kind: "browse"; entityKind: string; filters: Record<string, string> }
  | { kind: "entity"; id: string }
  | { kind: "theme_tree" }
  | { kind: "search"; q: string }
  | { kind: "experts"; q: string; k: number };

export function parseRoute(hash: string): Route {
  const trimmed = hash.replace(/^#/, "");
  const [path, queryString] = trimmed.split("?", 2);
  const params = new URLSearchParams(queryString ?? "");
  const segments = path.split("/").filter((s) => s.length > 0);

  if (segments[0] === "entities" && segments[1]) {
    return { kind: "entity", id: decodeURIComponent(segments.slice(1).join("/")) };
  }
  if (segments[0] === "browse" && segments[1]) {
    const filters: Record<string, string> = {};
    params.forEach((value, key) => {
      filters[key] = value;
    });
    return { kind: "browse", entityKind: segments[1], filters };
  }
  if (segments[0] === "themes") {
    return { kind: "theme_tree" };
  }
  if (segments[0] === "search") {
    return { kind: "search", q: params.get("q") ?? "" };
  }
  if (segments[0] === "experts") {
    return { kind: "experts", q: params.get("q") ?? "", k: Number(params.get("k") ?? "10") };
  }
  return { kind: "browse", entityKind: "staff", filters: {} };
}

export function formatRoute(route: Route): string {
  switch (route.kind) {
    case "entity":
      return `#/entities/${encodeURIComponent(route.id)}`;
    case "browse": {
      const params = new URLSearchParams(route.filters);
      const suffix = params.toString() ? `?${params.toString()}` : "";
      return `#/browse/${route.entityKind}${suffix}`;
    }
    case "theme_tree":
      return "#/themes";
    case "search":
      return route.q ? `#/search?q=${encodeURIComponent(route.q)}` : "#/search";
    case "experts":
      return route.q
        ? `#/experts?q=${encodeURIComponent(route.q)}&k=${route.k}`
        : "#/experts";
  }
}
