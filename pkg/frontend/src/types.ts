// Shapes of the API payloads the UI consumes. The UI never derives data
// itself; everything rendered comes from these responses as-is.

export type Kind = "staff" | "project" | "output" | "unit" | "theme";

export interface Summary {
  id: string;
  kind: Kind;
  title: string;
}

export interface EntityPayload {
  id: string;
  kind: Kind;
  title: string;
  fields: Record<string, unknown>;
  panels: Record<string, Summary[]>;
  aggregate?: { staff: string[]; projects: string[]; outputs: string[] };
  expertise?: { term: string; weight: number }[];
}

export interface BrowsePayload {
  total: number;
  offset: number;
  limit: number;
  items: Summary[];
}

export interface SearchHit extends Summary {
  score: number;
}

export interface SearchPayload {
  query: string;
  total: number;
  offset: number;
  limit: number;
  hits: SearchHit[];
}

export interface ThemeNode {
  id: string;
  label: string;
  children: ThemeNode[];
}

export interface TreePayload {
  facets: Record<string, ThemeNode[]>;
}

export interface RollupPayload {
  theme: string;
  label: string;
  staff: Summary[];
  projects: Summary[];
  outputs: Summary[];
}

export interface ExpertsPayload {
  terms: string[];
  experts: { id: string; title: string; score: number }[];
}

export interface ApiError {
  code: string;
  message: string;
  detail?: unknown;
}
