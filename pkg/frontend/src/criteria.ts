/** Pure form model for the criteria screen: validation and wire-document assembly. */

import type {
  CriteriaDoc,
  Difficulty,
  KnowledgeLevel,
  Relation,
  RuleDoc,
  RuleKind,
} from "./types.js";
import type { SessionRequest } from "./api.js";

export const RELATIONS: Relation[] = ["below", "at_most", "match", "at_least", "above"];
export const DIFFICULTIES: Difficulty[] = ["easy", "medium", "difficult"];
export const KNOWLEDGE_LEVELS: KnowledgeLevel[] = ["low", "good", "high"];

export interface CriteriaForm {
  topics: string[];
  kind: RuleKind;
  relation: Relation;
  difficultyPivot: Difficulty;
  /** Empty string means "use my profile" and requires a login. */
  knowledgePivot: KnowledgeLevel | "";
  count: number;
  seed: string;
  includeLikert: boolean;
  /** Declared education rank as entered; empty string means undeclared. */
  educationLevel: string;
}

export function defaultForm(): CriteriaForm {
  return {
    topics: [],
    kind: "by_difficulty",
    relation: "match",
    difficultyPivot: "medium",
    knowledgePivot: "",
    count: 10,
    seed: "",
    includeLikert: false,
    educationLevel: "",
  };
}

/** Returns human-readable problems; an empty list means the form can be sent. */
export function validateForm(form: CriteriaForm, loggedIn: boolean): string[] {
  const problems: string[] = [];
  if (form.topics.length === 0) {
    problems.push("pick at least one topic");
  }
  if (!Number.isInteger(form.count) || form.count < 1) {
    problems.push("count must be a whole number of at least 1");
  }
  if (form.seed !== "" && !/^-?\d+$/.test(form.seed.trim())) {
    problems.push("seed must be an integer or left blank");
  }
  if (form.educationLevel !== "") {
    const rank = Number(form.educationLevel);
    if (!Number.isInteger(rank) || rank < 1) {
      problems.push("education level must be a rank of at least 1");
    }
  }
  if (form.kind === "auto" && !loggedIn) {
    problems.push("automatic selection needs your profile; log in first");
  }
  if (form.kind === "by_knowledge" && form.knowledgePivot === "" && !loggedIn) {
    problems.push("knowledge selection without a declared level needs your profile; log in first");
  }
  if (form.kind === "by_education" && !loggedIn && form.educationLevel === "") {
    problems.push("education selection needs a login or a declared education level");
  }
  return problems;
}

function ruleDocument(form: CriteriaForm): RuleDoc {
  switch (form.kind) {
    case "by_difficulty":
      return { kind: "by_difficulty", relation: form.relation, pivot: form.difficultyPivot };
    case "by_knowledge":
      return form.knowledgePivot === ""
        ? { kind: "by_knowledge", relation: form.relation }
        : { kind: "by_knowledge", relation: form.relation, pivot: form.knowledgePivot };
    case "by_education":
      return { kind: "by_education", relation: form.relation };
    case "auto":
      return { kind: "auto" };
  }
}

export function criteriaDocument(form: CriteriaForm): CriteriaDoc {
  const doc: CriteriaDoc = {
    topics: [...form.topics],
    rule: ruleDocument(form),
    count: form.count,
  };
  if (form.seed !== "") doc.seed = Number(form.seed.trim());
  if (form.includeLikert) doc.include_likert = true;
  return doc;
}

export function sessionRequestBody(form: CriteriaForm): SessionRequest {
  const body: SessionRequest = { criteria: criteriaDocument(form) };
  if (form.educationLevel !== "") body.education_level = Number(form.educationLevel);
  return body;
}
