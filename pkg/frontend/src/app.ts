/** Application shell: routes, session flow, and the glue between screens.

The shell keeps one in-flight session at a time. Draft answers are written to
local storage on every interaction so a reload resumes mid-quiz, and they are
cleared the moment the session is finalized.
*/

import { Api, ApiError, type LoginResult } from "./api.js";
import {
  DIFFICULTIES,
  KNOWLEDGE_LEVELS,
  RELATIONS,
  defaultForm,
  sessionRequestBody,
  validateForm,
  type CriteriaForm,
} from "./criteria.js";
import { renderQuestion, type Renderer } from "./renderers.js";
import { renderResults } from "./results.js";
import { clearDraft, loadDraft, saveAnswer } from "./storage.js";
import type {
  Payload,
  PublicQuestion,
  RuleKind,
  SessionCreated,
  SubmitResult,
  Topic,
} from "./types.js";

type Route = "criteria" | "quiz" | "results" | "authoring" | "history";

interface AppState {
  route: Route;
  user: LoginResult | null;
  topics: Topic[];
  form: CriteriaForm;
  session: SessionCreated | null;
  answers: Record<string, Payload>;
  index: number;
  result: SubmitResult | null;
  confirmingSubmit: boolean;
}

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

function button(label: string, onClick: () => void, className = ""): HTMLButtonElement {
  const node = el("button", className, [label]);
  node.type = "button";
  node.addEventListener("click", onClick);
  return node;
}

export class App {
  readonly state: AppState = {
    route: "criteria",
    user: null,
    topics: [],
    form: defaultForm(),
    session: null,
    answers: {},
    index: 0,
    result: null,
    confirmingSubmit: false,
  };

  private renderer: Renderer | null = null;
  private statusBar = el("div", "status");

  constructor(
    private readonly root: HTMLElement,
    private readonly api: Api,
    private readonly storage: Storage,
  ) {}

  async start(): Promise<void> {
    try {
      const doc = await this.api.topics();
      this.state.topics = doc.topics;
    } catch (err) {
      this.showError(err);
    }
    const draft = loadDraft(this.storage);
    if (draft) {
      try {
        const session = await this.api.getSession(draft.sessionId);
        if (session.state !== "finalized") {
          this.state.session = session;
          this.state.answers = draft.answers;
          this.state.route = "quiz";
        } else {
          clearDraft(this.storage);
        }
      } catch {
        clearDraft(this.storage);
      }
    }
    this.render();
  }

  // --- rendering ------------------------------------------------------------

  render(): void {
    this.flushCurrentAnswer();
    this.root.textContent = "";
    this.root.append(this.renderHeader(), this.statusBar);
    switch (this.state.route) {
      case "criteria":
        this.root.append(this.renderCriteria());
        break;
      case "quiz":
        this.root.append(this.renderQuiz());
        break;
      case "results":
        this.root.append(this.renderResultsScreen());
        break;
      case "authoring":
        this.root.append(this.renderAuthoring());
        break;
      case "history":
        this.root.append(this.renderHistoryScreen());
        break;
    }
  }

  private renderHeader(): HTMLElement {
    const header = el("header", "app-header");
    header.append(el("h1", "", ["Self-assessment"]));
    const nav = el("nav", "");
    nav.append(button("New quiz", () => this.goto("criteria")));
    if (this.state.user) {
      nav.append(button("History", () => void this.openHistory()));
      if (this.state.user.role === "educator" || this.state.user.role === "admin") {
        nav.append(button("Authoring", () => this.goto("authoring")));
      }
    }
    header.append(nav);
    header.append(this.renderLoginBox());
    return header;
  }

  private renderLoginBox(): HTMLElement {
    const box = el("div", "login-box");
    if (this.state.user) {
      box.append(el("span", "", [`${this.state.user.username} (${this.state.user.role}) `]));
      box.append(
        button("Log out", () => {
          this.api.logout();
          this.state.user = null;
          this.render();
        }),
      );
      return box;
    }
    const username = el("input", "");
    username.placeholder = "username";
    const password = el("input", "");
    password.type = "password";
    password.placeholder = "password";
    box.append(
      username,
      password,
      button("Log in", () => {
        void this.login(username.value, password.value);
      }),
      el("span", "hint", [" or continue as guest"]),
    );
    return box;
  }

  private async login(username: string, password: string): Promise<void> {
    try {
      this.state.user = await this.api.login(username, password);
      this.clearError();
      this.render();
    } catch (err) {
      this.showError(err);
    }
  }

  // --- criteria screen ------------------------------------------------------

  private renderCriteria(): HTMLElement {
    const form = this.state.form;
    const loggedIn = this.state.user !== null;
    const screen = el("section", "criteria-screen");
    screen.append(el("h2", "", ["Assessment criteria"]));

    const topicBox = el("fieldset", "topic-picker", [el("legend", "", ["Topics"])]);
    for (const topic of this.state.topics) {
      const input = el("input", "");
      input.type = "checkbox";
      input.value = topic.id;
      input.checked = form.topics.includes(topic.id);
      input.addEventListener("change", () => {
        form.topics = input.checked
          ? [...form.topics, topic.id]
          : form.topics.filter((t) => t !== topic.id);
      });
      const depth = topic.id.split(".").length - 1;
      const label = el("label", "topic", [input, ` ${topic.name} (${topic.id})`]);
      label.style.marginLeft = `${depth}em`;
      topicBox.append(label);
    }
    screen.append(topicBox);

    const ruleBox = el("fieldset", "rule-picker", [el("legend", "", ["Question rule"])]);
    const kinds: { kind: RuleKind; label: string; disabled: boolean; hint: string }[] = [
      { kind: "by_difficulty", label: "By difficulty", disabled: false, hint: "" },
      { kind: "by_knowledge", label: "By knowledge level", disabled: false, hint: "" },
      { kind: "by_education", label: "By education level", disabled: false, hint: "" },
      {
        kind: "auto",
        label: "Automatic (from my profile)",
        disabled: !loggedIn,
        hint: loggedIn ? "" : "log in to use your saved profile",
      },
    ];
    for (const k of kinds) {
      const input = el("input", "");
      input.type = "radio";
      input.name = "rule-kind";
      input.value = k.kind;
      input.checked = form.kind === k.kind;
      input.disabled = k.disabled;
      input.addEventListener("change", () => {
        form.kind = k.kind;
        this.render();
      });
      const label = el("label", "rule-kind", [input, ` ${k.label}`]);
      if (k.hint) label.append(el("span", "hint", [` (${k.hint})`]));
      ruleBox.append(label);
    }

    if (form.kind !== "auto") {
      const relation = el("select", "relation");
      for (const r of RELATIONS) {
        const opt = el("option", "", [r.replace("_", " ")]);
        opt.value = r;
        opt.selected = form.relation === r;
        relation.append(opt);
      }
      relation.addEventListener("change", () => {
        form.relation = relation.value as CriteriaForm["relation"];
      });
      ruleBox.append(el("label", "", ["Relation: ", relation]));
    }

    if (form.kind === "by_difficulty") {
      const pivot = el("select", "difficulty-pivot");
      for (const d of DIFFICULTIES) {
        const opt = el("option", "", [d]);
        opt.value = d;
        opt.selected = form.difficultyPivot === d;
        pivot.append(opt);
      }
      pivot.addEventListener("change", () => {
        form.difficultyPivot = pivot.value as CriteriaForm["difficultyPivot"];
      });
      ruleBox.append(el("label", "", ["Difficulty: ", pivot]));
    }

    if (form.kind === "by_knowledge") {
      const pivot = el("select", "knowledge-pivot");
      const fromProfile = el("option", "", [
        loggedIn ? "use my profile" : "use my profile (log in)",
      ]);
      fromProfile.value = "";
      pivot.append(fromProfile);
      for (const level of KNOWLEDGE_LEVELS) {
        const opt = el("option", "", [`I rate myself ${level}`]);
        opt.value = level;
        opt.selected = form.knowledgePivot === level;
        pivot.append(opt);
      }
      pivot.addEventListener("change", () => {
        form.knowledgePivot = pivot.value as CriteriaForm["knowledgePivot"];
      });
      ruleBox.append(el("label", "", ["Knowledge: ", pivot]));
    }
    screen.append(ruleBox);

    const detailBox = el("fieldset", "details", [el("legend", "", ["Details"])]);
    const count = el("input", "count");
    count.type = "number";
    count.min = "1";
    count.value = String(form.count);
    count.addEventListener("change", () => {
      form.count = Number(count.value);
    });
    detailBox.append(el("label", "", ["Number of items: ", count]));

    const education = el("input", "education");
    education.type = "number";
    education.min = "1";
    education.placeholder = loggedIn ? "from profile" : "e.g. 3";
    education.value = form.educationLevel;
    education.addEventListener("change", () => {
      form.educationLevel = education.value;
    });
    detailBox.append(el("label", "", ["My education level: ", education]));

    const likert = el("input", "");
    likert.type = "checkbox";
    likert.checked = form.includeLikert;
    likert.addEventListener("change", () => {
      form.includeLikert = likert.checked;
    });
    detailBox.append(el("label", "", [likert, " include opinion-scale items"]));

    const seed = el("input", "seed");
    seed.placeholder = "random";
    seed.value = form.seed;
    seed.addEventListener("change", () => {
      form.seed = seed.value;
    });
    detailBox.append(el("label", "", ["Seed: ", seed]));
    screen.append(detailBox);

    const problems = el("ul", "problems");
    screen.append(problems);
    screen.append(
      button(
        "Start assessment",
        () => {
          const messages = validateForm(form, loggedIn);
          problems.textContent = "";
          for (const message of messages) problems.append(el("li", "", [message]));
          if (messages.length === 0) void this.createSession();
        },
        "primary",
      ),
    );
    return screen;
  }

  private async createSession(): Promise<void> {
    try {
      const session = await this.api.createSession(sessionRequestBody(this.state.form));
      this.state.session = session;
      this.state.answers = {};
      this.state.index = 0;
      this.state.result = null;
      this.state.confirmingSubmit = false;
      clearDraft(this.storage);
      this.clearError();
      this.goto("quiz");
    } catch (err) {
      this.showError(err);
    }
  }

  // --- quiz screen ----------------------------------------------------------

  private renderQuiz(): HTMLElement {
    const session = this.state.session;
    const screen = el("section", "quiz-screen");
    if (!session) {
      screen.append(el("p", "", ["No session in progress."]));
      return screen;
    }
    const questions = session.questions;
    const question = questions[this.state.index];
    if (!question) {
      screen.append(el("p", "", ["No questions in this session."]));
      return screen;
    }

    screen.append(
      el("p", "progress", [`Question ${this.state.index + 1} of ${questions.length}`]),
    );
    this.renderer = renderQuestion(question, this.state.answers[question.id] ?? null);
    // Persist the draft on every interaction so a reload never loses work.
    for (const kind of ["change", "click", "input"] as const) {
      this.renderer.root.addEventListener(kind, () => this.flushCurrentAnswer());
    }
    screen.append(this.renderer.root);

    const nav = el("div", "quiz-nav");
    if (this.state.index > 0) {
      nav.append(button("Previous", () => this.gotoQuestion(this.state.index - 1)));
    }
    if (this.state.index < questions.length - 1) {
      nav.append(button("Next", () => this.gotoQuestion(this.state.index + 1)));
    }
    const unanswered = questions.filter((q) => !(q.id in this.state.answers)).length;
    const submitLabel = this.state.confirmingSubmit
      ? `Submit with ${unanswered} unanswered (they score zero)`
      : "Finish and grade";
    nav.append(
      button(
        submitLabel,
        () => {
          void this.submit();
        },
        "primary",
      ),
    );
    screen.append(nav);
    return screen;
  }

  private gotoQuestion(index: number): void {
    this.state.index = index;
    this.state.confirmingSubmit = false;
    this.render();
  }

  private flushCurrentAnswer(): void {
    const session = this.state.session;
    if (!session || !this.renderer) return;
    const question = session.questions[this.state.index];
    if (!question) return;
    const payload = this.renderer.read();
    if (payload === null) return;
    this.state.answers[question.id] = payload;
    saveAnswer(this.storage, session.session_id, question.id, payload);
  }

  private async submit(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    this.flushCurrentAnswer();
    const unanswered = session.questions.filter((q) => !(q.id in this.state.answers));
    if (unanswered.length > 0 && !this.state.confirmingSubmit) {
      this.state.confirmingSubmit = true;
      this.render();
      return;
    }
    // Unanswered items go up as explicit nulls: a deliberate skip, not an
    // omission the server should wait for.
    const payloads: Record<string, Payload | null> = {};
    for (const q of session.questions) {
      payloads[q.id] = this.state.answers[q.id] ?? null;
    }
    try {
      await this.api.postAnswers(session.session_id, payloads);
      this.state.result = await this.api.submit(session.session_id);
      clearDraft(this.storage);
      this.clearError();
      this.goto("results");
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // Already finalized (a retry raced us): drop the draft and move on.
        clearDraft(this.storage);
        this.showError(err);
        this.goto("criteria");
        return;
      }
      this.showError(err);
    }
  }

  // --- results screen -------------------------------------------------------

  private renderResultsScreen(): HTMLElement {
    const screen = el("section", "results-screen");
    if (!this.state.result || !this.state.session) {
      screen.append(el("p", "", ["No finalized session to show."]));
      return screen;
    }
    const stems = new Map(this.state.session.questions.map((q) => [q.id, q.stem.text]));
    screen.append(renderResults(this.state.result, stems));
    screen.append(button("Take another quiz", () => this.goto("criteria"), "primary"));
    return screen;
  }

  // --- history screen -------------------------------------------------------

  private async openHistory(): Promise<void> {
    this.goto("history");
  }

  private renderHistoryScreen(): HTMLElement {
    const screen = el("section", "history-screen");
    screen.append(el("h2", "", ["Past sessions"]));
    const host = el("div", "history-body", [el("p", "", ["Loading..."])]);
    screen.append(host);
    void this.api
      .history()
      .then((doc) => {
        host.textContent = "";
        if (doc.sessions.length === 0) {
          host.append(el("p", "", ["No sessions yet."]));
          return;
        }
        for (const record of doc.sessions) {
          const parts = record.topic_results
            .map((r) => `${r.topic_id} ${r.percent.toFixed(1)}%`)
            .join(", ");
          host.append(
            el("div", "history-record", [
              el("p", "", [`${record.timestamp} (${record.session_id})`]),
              el("p", "", [parts || "no graded topics"]),
            ]),
          );
        }
      })
      .catch((err) => {
        host.textContent = "";
        this.showError(err);
      });
    return screen;
  }

  // --- authoring screen -----------------------------------------------------

  private renderAuthoring(): HTMLElement {
    const screen = el("section", "authoring-screen");
    screen.append(el("h2", "", ["Authoring"]));

    const topicForm = el("fieldset", "", [el("legend", "", ["Add a topic"])]);
    const topicId = el("input", "");
    topicId.placeholder = "id, e.g. econ.supply";
    const topicName = el("input", "");
    topicName.placeholder = "display name";
    const parent = el("select", "");
    const noParent = el("option", "", ["(root topic)"]);
    noParent.value = "";
    parent.append(noParent);
    for (const topic of this.state.topics) {
      const opt = el("option", "", [topic.id]);
      opt.value = topic.id;
      parent.append(opt);
    }
    topicForm.append(
      el("label", "", ["Id: ", topicId]),
      el("label", "", ["Name: ", topicName]),
      el("label", "", ["Parent: ", parent]),
      button("Create topic", () => {
        const body: { id: string; name: string; parent?: string } = {
          id: topicId.value.trim(),
          name: topicName.value.trim(),
        };
        if (parent.value !== "") body.parent = parent.value;
        void this.api
          .addTopic(body)
          .then(() => this.api.topics())
          .then((doc) => {
            this.state.topics = doc.topics;
            this.clearError();
            this.render();
          })
          .catch((err) => this.showError(err));
      }),
    );
    screen.append(topicForm);

    const questionForm = el("fieldset", "", [el("legend", "", ["Add a question"])]);
    const editor = el("textarea", "question-editor");
    editor.rows = 14;
    editor.placeholder = '{"id": "...", "type": "true_false", ...}';
    questionForm.append(
      editor,
      button("Create question", () => {
        let doc: Record<string, unknown>;
        try {
          doc = JSON.parse(editor.value) as Record<string, unknown>;
        } catch {
          this.showError(new Error("question document is not valid JSON"));
          return;
        }
        void this.api
          .addQuestion(doc)
          .then(() => {
            editor.value = "";
            this.clearError();
            this.statusBar.textContent = "question created";
          })
          .catch((err) => this.showError(err));
      }),
    );
    screen.append(questionForm);
    return screen;
  }

  // --- plumbing ---------------------------------------------------------------

  private goto(route: Route): void {
    this.state.route = route;
    this.render();
  }

  private showError(err: unknown): void {
    if (err instanceof ApiError) {
      const details = err.details === null ? "" : ` ${JSON.stringify(err.details)}`;
      this.statusBar.textContent = `${err.code}: ${err.message}${details}`;
    } else {
      this.statusBar.textContent = err instanceof Error ? err.message : String(err);
    }
    this.statusBar.classList.add("error");
  }

  private clearError(): void {
    this.statusBar.textContent = "";
    this.statusBar.classList.remove("error");
  }
}

export function createApp(root: HTMLElement, api?: Api, storage?: Storage): App {
  return new App(root, api ?? new Api(""), storage ?? window.localStorage);
}
