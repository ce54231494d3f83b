/** Wire types for the selfassess HTTP API (see docs/api.md in the repo root). */

export type QuestionType =
  | "multiple_choice"
  | "multiple_response"
  | "true_false"
  | "fill_blanks"
  | "matching"
  | "sequence"
  | "hotspot"
  | "drag_drop"
  | "select_lists"
  | "likert";

export type Difficulty = "easy" | "medium" | "difficult";
export type KnowledgeLevel = "low" | "good" | "high";
export type Relation = "below" | "at_most" | "match" | "at_least" | "above";
export type RuleKind = "by_difficulty" | "by_knowledge" | "by_education" | "auto";

export interface Entry {
  id: string;
  text: string;
}

/** A question as a test taker sees it: never a key, never explanations. */
export interface PublicQuestion {
  id: string;
  type: QuestionType;
  stem: { text: string; media?: string };
  body: Record<string, unknown>;
  difficulty: Difficulty;
  education_level: number;
  weight: number;
  topics: string[];
}

/** Answer payload; null is an explicit skip. */
export type Payload = Record<string, unknown>;

export interface Topic {
  id: string;
  name: string;
  parent?: string;
}

export interface RuleDoc {
  kind: RuleKind;
  relation?: Relation;
  pivot?: string;
}

export interface CriteriaDoc {
  topics: string[];
  rule: RuleDoc;
  count: number;
  seed?: number;
  include_likert?: boolean;
}

export interface SessionCreated {
  session_id: string;
  state: string;
  criteria: CriteriaDoc;
  questions: PublicQuestion[];
  clusters: { topic_id: string; question_ids: string[] }[];
}

export interface ItemResult {
  question_id: string;
  graded: boolean;
  score: number | null;
  weighted: number | null;
  explanations?: Record<string, string>;
}

export interface TopicResult {
  topic_id: string;
  percent: number;
  item_count: number;
  inferred_level: KnowledgeLevel;
}

export interface WeaknessDoc {
  entries: { topic_id: string; percent: number; level: KnowledgeLevel }[];
  erroneous: { question_id: string; score: number; concepts: string[] }[];
}

export interface SubmitResult {
  session_id: string;
  state: string;
  overall_percent: number | null;
  items: ItemResult[];
  topics: TopicResult[];
  weakness: WeaknessDoc;
}

export interface MetaDoc {
  rule_kinds: RuleKind[];
  relations: Relation[];
  difficulties: Difficulty[];
  knowledge_levels: KnowledgeLevel[];
  education_levels: { rank: number; label: string }[];
}

export interface ProfileDoc {
  learner_id: string;
  education_level: number;
  knowledge: Record<string, KnowledgeLevel>;
}

export interface HistoryDoc {
  sessions: {
    session_id: string;
    timestamp: string;
    criteria: CriteriaDoc;
    levels: Record<string, KnowledgeLevel>;
    topic_results: TopicResult[];
  }[];
}
