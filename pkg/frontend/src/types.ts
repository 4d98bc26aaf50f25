// Payload shapes served by the planning API. The UI renders these verbatim;
// no scheduling math happens client-side.

export interface CategoryInfo {
  id: string;
  name: string;
  kind: "fixed" | "non_fixed";
}

export interface SlotDoc {
  category_id: string;
  start: number;
  end: number;
}

export interface PlanDoc {
  category_order: string[];
  choices: Record<string, string>;
  slots: SlotDoc[];
  project_duration: number;
  critical_path: string[];
  critical_variance: number;
  std_dev: number;
  z_value: number | null;
  probability: number | null;
  total_float: Record<string, number>;
}

export interface PromptDoc {
  withdrawable: string[];
  diagnostics: [string, string][];
}

export interface FailureDoc {
  reasons: [string, string][];
  orders_tried: string[][];
}

export interface OutcomeDoc {
  status: "selected" | "tie" | "negotiation_needed" | "failure";
  deadline: number;
  search_mode: string;
  orders_tried: string[][];
  truncated: boolean;
  plan?: PlanDoc;
  tie?: PlanDoc[];
  prompt?: PromptDoc;
  failure?: FailureDoc;
}

export type SessionState =
  | "running"
  | "awaiting_negotiation"
  | "awaiting_tie_choice"
  | "done"
  | "failed";

export interface SessionDoc {
  session_id: string;
  state: SessionState;
  transcript: { withdrawn: string[]; allow_fixed: boolean }[];
  prompt?: PromptDoc;
  outcome?: OutcomeDoc;
}

export interface CurvePoint {
  z: number;
  phi: number;
}

export interface CurveDoc {
  degenerate: boolean;
  z_value: number | null;
  probability: number;
  project_duration: number;
  std_dev: number;
  deadline: number;
  points: CurvePoint[];
}

export interface BookingRecordDoc {
  service_id: string;
  category_id: string;
  slot: { start: number; end: number };
  status: "confirmed" | "rolled_back" | "failed";
  confirmation: string;
}

export interface ItineraryDoc {
  ok: boolean;
  failed_service_id: string | null;
  records: BookingRecordDoc[];
}

export interface PlanRequestBody {
  deadline?: number;
  fc_order?: string[];
  nc_set?: string[];
  search_mode?: string;
  candidate_cap?: number;
  interactive?: boolean;
}
