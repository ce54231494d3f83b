/** Builds the post-submission results view from a finalized session document. */

import type { SubmitResult } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  for (const child of children) node.append(child);
  return node;
}

function formatPercent(value: number | null): string {
  return value === null ? "n/a" : `${value.toFixed(1)}%`;
}

/** stems maps question ids to their stem text for the erroneous-item list. */
export function renderResults(result: SubmitResult, stems: Map<string, string>): HTMLElement {
  const root = el("div", "results");
  root.append(el("h2", "", ["Results"]));
  root.append(
    el("p", "overall", [`Overall score: ${formatPercent(result.overall_percent)}`]),
  );

  // Topic breakdown, weakest first: the weakness entries carry the order.
  const byTopic = new Map(result.topics.map((t) => [t.topic_id, t]));
  const topicList = el("ul", "topic-results");
  for (const entry of result.weakness.entries) {
    const topic = byTopic.get(entry.topic_id);
    const items = topic ? `${topic.item_count} item${topic.item_count === 1 ? "" : "s"}` : "";
    topicList.append(
      el("li", `level-${entry.level}`, [
        `${entry.topic_id}: ${formatPercent(entry.percent)} (${entry.level}, ${items})`,
      ]),
    );
  }
  root.append(el("h3", "", ["By topic"]), topicList);

  const weak = result.weakness.entries.filter((e) => e.level !== "high");
  const focus = el("div", "focus-areas");
  focus.append(el("h3", "", ["Where to focus"]));
  if (weak.length === 0) {
    focus.append(el("p", "", ["No weak areas this time. Nice work."]));
  } else {
    const list = el("ul", "weak-topics");
    for (const entry of weak) {
      list.append(el("li", "", [`${entry.topic_id} (${formatPercent(entry.percent)})`]));
    }
    focus.append(list);
  }
  root.append(focus);

  // Per-item review: explanations arrive only on items scored below full
  // marks, so their presence here is exactly the disclosure the server made.
  const explanationsByQuestion = new Map(
    result.items
      .filter((i) => i.explanations !== undefined)
      .map((i) => [i.question_id, i.explanations!]),
  );
  if (result.weakness.erroneous.length > 0) {
    const list = el("ul", "erroneous-items");
    for (const miss of result.weakness.erroneous) {
      const item = el("li", "erroneous");
      item.append(el("p", "miss-stem", [stems.get(miss.question_id) ?? miss.question_id]));
      item.append(
        el("p", "miss-score", [
          `score ${miss.score.toFixed(2)}; concepts: ${miss.concepts.join(", ") || "none"}`,
        ]),
      );
      const explanations = explanationsByQuestion.get(miss.question_id);
      if (explanations) {
        for (const [concept, note] of Object.entries(explanations)) {
          item.append(el("p", "explanation", [`${concept}: ${note}`]));
        }
      }
      list.append(item);
    }
    root.append(el("h3", "", ["Review these"]), list);
  }

  return root;
}
