/** DOM renderers for every question type.

Each renderer owns a detached root element and exposes the answer it holds:
read() returns the payload to send (null while the learner has given nothing)
and complete() says whether the item is fully answered. Renderers restore
themselves from a previously saved payload so a quiz survives a reload.
*/

import type { Entry, Payload, PublicQuestion } from "./types.js";

export interface Renderer {
  root: HTMLElement;
  read(): Payload | null;
  complete(): boolean;
}

type Attrs = Record<string, string>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  for (const child of children) node.append(child);
  return node;
}

function entries(body: Payload, field: string): Entry[] {
  return body[field] as Entry[];
}

function stemBlock(q: PublicQuestion): HTMLElement {
  const block = el("div", { class: "stem" }, [el("p", {}, [q.stem.text])]);
  if (q.stem.media) {
    block.append(el("p", { class: "stem-media" }, [`media: ${q.stem.media}`]));
  }
  return block;
}

// --- single pick from options ----------------------------------------------

function renderMultipleChoice(q: PublicQuestion, saved: Payload | null): Renderer {
  const root = el("div", { class: "question mc" }, [stemBlock(q)]);
  const name = `mc-${q.id}`;
  const inputs: HTMLInputElement[] = [];
  for (const opt of entries(q.body, "options")) {
    const input = el("input", { type: "radio", name, value: opt.id });
    if (saved && saved["option"] === opt.id) input.checked = true;
    inputs.push(input);
    root.append(el("label", { class: "option" }, [input, " ", opt.text]));
  }
  const picked = () => inputs.find((i) => i.checked) ?? null;
  return {
    root,
    read: () => (picked() ? { option: picked()!.value } : null),
    complete: () => picked() !== null,
  };
}

function renderTrueFalse(q: PublicQuestion, saved: Payload | null): Renderer {
  const root = el("div", { class: "question tf" }, [stemBlock(q)]);
  const name = `tf-${q.id}`;
  const inputs: HTMLInputElement[] = [];
  for (const value of [true, false]) {
    const input = el("input", { type: "radio", name, value: String(value) });
    if (saved && saved["value"] === value) input.checked = true;
    inputs.push(input);
    root.append(el("label", { class: "option" }, [input, " ", value ? "True" : "False"]));
  }
  const picked = () => inputs.find((i) => i.checked) ?? null;
  return {
    root,
    read: () => (picked() ? { value: picked()!.value === "true" } : null),
    complete: () => picked() !== null,
  };
}

// --- multiple picks ---------------------------------------------------------

function renderMultipleResponse(q: PublicQuestion, saved: Payload | null): Renderer {
  const root = el("div", { class: "question mr" }, [stemBlock(q)]);
  const savedSet = new Set((saved?.["options"] as string[] | undefined) ?? []);
  const inputs: HTMLInputElement[] = [];
  for (const opt of entries(q.body, "options")) {
    const input = el("input", { type: "checkbox", value: opt.id });
    if (savedSet.has(opt.id)) input.checked = true;
    inputs.push(input);
    root.append(el("label", { class: "option" }, [input, " ", opt.text]));
  }
  const chosen = () => inputs.filter((i) => i.checked).map((i) => i.value);
  return {
    root,
    read: () => (chosen().length > 0 ? { options: chosen() } : null),
    complete: () => chosen().length > 0,
  };
}

// --- free text blanks -------------------------------------------------------

function renderFillBlanks(q: PublicQuestion, saved: Payload | null): Renderer {
  const root = el("div", { class: "question fill" }, [stemBlock(q)]);
  const blanks = q.body["blanks"] as string[];
  const savedBlanks = (saved?.["blanks"] as Record<string, string> | undefined) ?? {};
  const inputs = new Map<string, HTMLInputElement>();
  for (const bid of blanks) {
    const input = el("input", { type: "text", "data-blank": bid });
    input.value = savedBlanks[bid] ?? "";
    inputs.set(bid, input);
    root.append(el("label", { class: "blank" }, [`${bid}: `, input]));
  }
  const filled = () => {
    const out: Record<string, string> = {};
    for (const [bid, input] of inputs) {
      if (input.value.trim() !== "") out[bid] = input.value;
    }
    return out;
  };
  return {
    root,
    read: () => {
      const out = filled();
      return Object.keys(out).length > 0 ? { blanks: out } : null;
    },
    complete: () => Object.keys(filled()).length === blanks.length,
  };
}

// --- pairing and placement --------------------------------------------------

function assignmentSelect(
  options: Entry[],
  savedValue: string | undefined,
  placeholder: string,
): HTMLSelectElement {
  const select = el("select", {}, [el("option", { value: "" }, [placeholder])]);
  for (const opt of options) {
    const node = el("option", { value: opt.id }, [opt.text]);
    if (savedValue === opt.id) node.selected = true;
    select.append(node);
  }
  return select;
}

function renderMatching(q: PublicQuestion, saved: Payload | null): Renderer {
  const root = el("div", { class: "question matching" }, [stemBlock(q)]);
  const right = entries(q.body, "right");
  const savedPairs = (saved?.["pairs"] as Record<string, string> | undefined) ?? {};
  const selects = new Map<string, HTMLSelectElement>();
  for (const left of entries(q.body, "left")) {
    const select = assignmentSelect(right, savedPairs[left.id], "choose a match");
    selects.set(left.id, select);
    root.append(el("div", { class: "pair" }, [el("span", {}, [left.text]), " ", select]));
  }
  const pairs = () => {
    const out: Record<string, string> = {};
    for (const [lid, select] of selects) {
      if (select.value !== "") out[lid] = select.value;
    }
    return out;
  };
  return {
    root,
    read: () => {
      const out = pairs();
      return Object.keys(out).length > 0 ? { pairs: out } : null;
    },
    complete: () => Object.keys(pairs()).length === selects.size,
  };
}

function renderSelectLists(q: PublicQuestion, saved: Payload | null): Renderer {
  const root = el("div", { class: "question select-lists" }, [stemBlock(q)]);
  const savedChoices = (saved?.["choices"] as Record<string, string> | undefined) ?? {};
  const selectDefs = q.body["selects"] as { id: string; options: Entry[] }[];
  const selects = new Map<string, HTMLSelectElement>();
  for (const def of selectDefs) {
    const select = assignmentSelect(def.options, savedChoices[def.id], "choose");
    selects.set(def.id, select);
    root.append(el("div", { class: "select-slot" }, [el("span", {}, [`${def.id}: `]), select]));
  }
  const choices = () => {
    const out: Record<string, string> = {};
    for (const [sid, select] of selects) {
      if (select.value !== "") out[sid] = select.value;
    }
    return out;
  };
  return {
    root,
    read: () => {
      const out = choices();
      return Object.keys(out).length > 0 ? { choices: out } : null;
    },
    complete: () => Object.keys(choices()).length === selects.size,
  };
}

function renderDragDrop(q: PublicQuestion, saved: Payload | null): Renderer {
  // Tap to select an item, tap a zone to place it: works with mouse and touch
  // alike, so no native drag events to fake in tests.
  const root = el("div", { class: "question drag-drop" }, [stemBlock(q)]);
  const items = entries(q.body, "items");
  const zones = q.body["zones"] as { id: string; label: string }[];
  const placements: Record<string, string> = {
    ...((saved?.["placements"] as Record<string, string> | undefined) ?? {}),
  };
  let selected: string | null = null;

  const itemButtons = new Map<string, HTMLButtonElement>();
  const zoneLists = new Map<string, HTMLElement>();

  const tray = el("div", { class: "tray" });
  for (const item of items) {
    const button = el("button", { type: "button", "data-item": item.id }, [item.text]);
    button.addEventListener("click", () => {
      selected = selected === item.id ? null : item.id;
      refresh();
    });
    itemButtons.set(item.id, button);
    tray.append(button);
  }
  root.append(tray);

  for (const zone of zones) {
    const list = el("div", { class: "zone-items" });
    zoneLists.set(zone.id, list);
    const zoneBox = el("div", { class: "zone", "data-zone": zone.id }, [
      el("p", { class: "zone-label" }, [zone.label]),
      list,
    ]);
    zoneBox.addEventListener("click", () => {
      if (selected === null) return;
      placements[selected] = zone.id;
      selected = null;
      refresh();
    });
    root.append(zoneBox);
  }

  function refresh(): void {
    for (const [iid, button] of itemButtons) {
      button.classList.toggle("selected", iid === selected);
      button.classList.toggle("placed", iid in placements);
    }
    for (const list of zoneLists.values()) list.textContent = "";
    for (const item of items) {
      const zid = placements[item.id];
      if (zid !== undefined) zoneLists.get(zid)?.append(el("span", { class: "chip" }, [item.text]));
    }
  }
  refresh();

  return {
    root,
    read: () => (Object.keys(placements).length > 0 ? { placements: { ...placements } } : null),
    complete: () => Object.keys(placements).length === items.length,
  };
}

// --- ordering ---------------------------------------------------------------

function renderSequence(q: PublicQuestion, saved: Payload | null): Renderer {
  const items = entries(q.body, "items");
  const byId = new Map(items.map((i) => [i.id, i]));
  let order = items.map((i) => i.id);
  // The payload must be a full permutation, so an untouched list is "no
  // answer" rather than an accidental claim that the given order is right.
  let touched = false;
  const savedOrder = saved?.["order"] as string[] | undefined;
  if (savedOrder && [...savedOrder].sort().join() === [...order].sort().join()) {
    order = [...savedOrder];
    touched = true;
  }

  const root = el("div", { class: "question sequence" }, [stemBlock(q)]);
  const list = el("ol", { class: "sequence-items" });
  root.append(list);

  function move(index: number, delta: number): void {
    // Even a no-op boundary move counts as an answer: it is the only way to
    // confirm that the presented order is the one the learner means.
    touched = true;
    const target = index + delta;
    if (target < 0 || target >= order.length) return;
    const here = order[index]!;
    order[index] = order[target]!;
    order[target] = here;
    refresh();
  }

  function refresh(): void {
    list.textContent = "";
    order.forEach((iid, index) => {
      const up = el("button", { type: "button", "data-move": "up" }, ["up"]);
      const down = el("button", { type: "button", "data-move": "down" }, ["down"]);
      up.addEventListener("click", () => move(index, -1));
      down.addEventListener("click", () => move(index, +1));
      list.append(el("li", { "data-item": iid }, [up, down, " ", byId.get(iid)!.text]));
    });
  }
  refresh();

  return {
    root,
    read: () => (touched ? { order: [...order] } : null),
    complete: () => touched,
  };
}

// --- image click ------------------------------------------------------------

function renderHotspot(q: PublicQuestion, saved: Payload | null): Renderer {
  const width = q.body["width"] as number;
  const height = q.body["height"] as number;
  let point: { x: number; y: number } | null = null;
  if (saved && typeof saved["x"] === "number" && typeof saved["y"] === "number") {
    point = { x: saved["x"], y: saved["y"] };
  }

  const image = el("img", {
    class: "hotspot-image",
    src: q.body["image"] as string,
    alt: q.stem.text,
    width: String(width),
    height: String(height),
    draggable: "false",
  });
  const marker = el("span", { class: "hotspot-marker" }, ["x"]);
  const surface = el("div", { class: "hotspot-surface" }, [image, marker]);
  const readout = el("p", { class: "hotspot-readout" });
  const root = el("div", { class: "question hotspot" }, [stemBlock(q), surface, readout]);

  surface.addEventListener("click", (event) => {
    // Convert the viewport click to image-pixel coordinates. Layout engines
    // report the rendered rect; environments without layout report a zero
    // rect, in which case the offsets are taken as pixels directly.
    const rect = surface.getBoundingClientRect();
    const scaleX = rect.width > 0 ? width / rect.width : 1;
    const scaleY = rect.height > 0 ? height / rect.height : 1;
    point = {
      x: (event.clientX - rect.left) * scaleX,
      y: (event.clientY - rect.top) * scaleY,
    };
    refresh();
  });

  function refresh(): void {
    if (point === null) {
      readout.textContent = "click the image to answer";
      marker.style.display = "none";
      return;
    }
    readout.textContent = `marked at (${Math.round(point.x)}, ${Math.round(point.y)})`;
    marker.style.display = "block";
    marker.style.left = `${(100 * point.x) / width}%`;
    marker.style.top = `${(100 * point.y) / height}%`;
  }
  refresh();

  return {
    root,
    read: () => (point ? { x: point.x, y: point.y } : null),
    complete: () => point !== null,
  };
}

// --- ungraded opinion scale -------------------------------------------------

function renderLikert(q: PublicQuestion, saved: Payload | null): Renderer {
  const scale = (q.body["scale"] as number | undefined) ?? 5;
  const labels = q.body["labels"] as string[] | undefined;
  const root = el("div", { class: "question likert" }, [stemBlock(q)]);
  const name = `likert-${q.id}`;
  const inputs: HTMLInputElement[] = [];
  for (let v = 1; v <= scale; v += 1) {
    const input = el("input", { type: "radio", name, value: String(v) });
    if (saved && saved["value"] === v) input.checked = true;
    inputs.push(input);
    const label = labels?.[v - 1] ?? String(v);
    root.append(el("label", { class: "option" }, [input, " ", label]));
  }
  const picked = () => inputs.find((i) => i.checked) ?? null;
  return {
    root,
    read: () => (picked() ? { value: Number(picked()!.value) } : null),
    complete: () => picked() !== null,
  };
}

// --- dispatch ---------------------------------------------------------------

const RENDERERS: Record<string, (q: PublicQuestion, saved: Payload | null) => Renderer> = {
  multiple_choice: renderMultipleChoice,
  multiple_response: renderMultipleResponse,
  true_false: renderTrueFalse,
  fill_blanks: renderFillBlanks,
  matching: renderMatching,
  sequence: renderSequence,
  hotspot: renderHotspot,
  drag_drop: renderDragDrop,
  select_lists: renderSelectLists,
  likert: renderLikert,
};

export function renderQuestion(q: PublicQuestion, saved: Payload | null = null): Renderer {
  const make = RENDERERS[q.type];
  if (!make) throw new Error(`no renderer for question type ${q.type}`);
  return make(q, saved);
}
