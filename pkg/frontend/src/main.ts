// Dashboard wiring: poll the session service, show the pending batch when a
// consultation is waiting, submit entered scores, and keep the trajectory
// chart live. One in-flight mutation at a time; reads are idempotent.

import { ApiError, SessionApi, type PendingBatch, type SessionSnapshot } from './api.js';
import {
  renderCandidateChart,
  renderCandidateRows,
  renderFinalTable,
  renderPhaseBadge,
  renderTrajectorySvg,
} from './render.js';
import { ConsultationForm, canAbort, canSubmit, isTerminal } from './state.js';

const POLL_INTERVAL_MS = 500;

interface PageConfig {
  baseUrl: string;
}

function pageConfig(): PageConfig {
  const meta = document.querySelector('meta[name="service-base-url"]');
  return { baseUrl: meta?.getAttribute('content') || '' };
}

class Dashboard {
  private api: SessionApi;
  private baseUrl: string;
  private sessionId: string | null = null;
  private snapshot: SessionSnapshot | null = null;
  private batch: PendingBatch | null = null;
  private form: ConsultationForm | null = null;
  private busy = false;
  private timer: number | null = null;
  private events: EventSource | null = null;

  constructor(private root: Document) {
    this.baseUrl = pageConfig().baseUrl;
    this.api = new SessionApi(this.baseUrl);
  }

  start(): void {
    this.byId('create').addEventListener('click', () => void this.createSession());
    this.byId('attach').addEventListener('click', () => {
      const id = (this.byId('session-id') as HTMLInputElement).value.trim();
      if (id) void this.attach(id);
    });
    this.byId('submit').addEventListener('click', () => void this.submit());
    this.byId('abort').addEventListener('click', () => void this.abort());
    this.byId('autorank').addEventListener('click', () => {
      if (this.form && this.batch) {
        this.form.assignRanks(this.batch.candidates.map((c) => c.id));
        this.render();
      }
    });
  }

  private byId(id: string): HTMLElement {
    const el = this.root.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  }

  private async createSession(): Promise<void> {
    const raw = (this.byId('config') as HTMLTextAreaElement).value;
    try {
      const config = JSON.parse(raw);
      const created = await this.api.createSession(config);
      await this.attach(created.id);
    } catch (err) {
      this.showError(err);
    }
  }

  private async attach(id: string): Promise<void> {
    this.sessionId = id;
    (this.byId('session-id') as HTMLInputElement).value = id;
    this.batch = null;
    this.form = null;
    if (this.timer !== null) window.clearInterval(this.timer);
    this.timer = window.setInterval(() => void this.poll(), POLL_INTERVAL_MS);
    this.upgradeToEventStream(id);
    await this.poll();
  }

  // polling is always sufficient; the phase stream just makes transitions
  // show up immediately when the browser supports it
  private upgradeToEventStream(id: string): void {
    this.events?.close();
    this.events = null;
    if (typeof EventSource === 'undefined') return;
    try {
      const source = new EventSource(`${this.baseUrl}/sessions/${id}/events`);
      source.addEventListener('phase', () => void this.poll());
      source.onerror = () => {
        source.close();
        if (this.events === source) this.events = null;
      };
      this.events = source;
    } catch {
      this.events = null;
    }
  }

  private async poll(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.snapshot = await this.api.getState(this.sessionId);
      if (this.snapshot.phase === 'awaiting_scores') {
        const pending = await this.api.getPending(this.sessionId);
        const stale =
          !this.batch ||
          !pending ||
          pending.session_index !== this.batch.session_index;
        if (pending && stale) {
          this.batch = pending;
          this.form = new ConsultationForm(pending);
        }
      } else {
        this.batch = null;
        this.form = null;
      }
      if (isTerminal(this.snapshot.phase)) {
        if (this.timer !== null) {
          window.clearInterval(this.timer);
          this.timer = null;
        }
        this.events?.close();
        this.events = null;
      }
      this.render();
    } catch (err) {
      this.showError(err);
    }
  }

  private async submit(): Promise<void> {
    if (!this.sessionId || !this.form || this.busy) return;
    if (!canSubmit(this.snapshot?.phase ?? 'running', this.form)) return;
    this.busy = true;
    try {
      await this.api.submitScores(this.sessionId, this.form.toScoreMap());
      this.batch = null;
      this.form = null;
      await this.poll();
    } catch (err) {
      this.showError(err);
      if (err instanceof ApiError && err.status === 409) {
        this.batch = null; // stale batch: refetch on the next poll
      }
    } finally {
      this.busy = false;
    }
  }

  private async abort(): Promise<void> {
    if (!this.sessionId || this.busy) return;
    this.busy = true;
    try {
      await this.api.abort(this.sessionId);
      await this.poll();
    } catch (err) {
      this.showError(err);
    } finally {
      this.busy = false;
    }
  }

  private showError(err: unknown): void {
    const banner = this.byId('error');
    if (err instanceof ApiError) {
      banner.textContent = `${err.code}: ${err.message}`;
    } else {
      banner.textContent = String(err);
    }
    banner.classList.remove('hidden');
    window.setTimeout(() => banner.classList.add('hidden'), 5000);
  }

  private render(): void {
    const snap = this.snapshot;
    if (!snap) return;
    this.byId('status').innerHTML = renderPhaseBadge(snap);
    this.byId('trajectory').innerHTML = renderTrajectorySvg(snap);
    this.byId('final').innerHTML = snap.phase === 'finished' ? renderFinalTable(snap) : '';

    const panel = this.byId('consultation');
    if (this.batch && this.form) {
      panel.classList.remove('hidden');
      this.byId('candidate-chart').innerHTML = renderCandidateChart(this.batch);
      const tbody = this.byId('candidate-rows');
      tbody.innerHTML = renderCandidateRows(this.batch, this.form);
      tbody.querySelectorAll('input[data-score-for]').forEach((input) => {
        input.addEventListener('input', () => {
          const el = input as HTMLInputElement;
          const value = el.value === '' ? null : Number(el.value);
          this.form?.setScore(el.dataset.scoreFor as string, value);
          this.syncControls();
        });
      });
    } else {
      panel.classList.add('hidden');
    }
    this.syncControls();
  }

  private syncControls(): void {
    const phase = this.snapshot?.phase ?? 'running';
    (this.byId('submit') as HTMLButtonElement).disabled = !canSubmit(phase, this.form);
    (this.byId('abort') as HTMLButtonElement).disabled = !canAbort(phase);
  }
}

if (typeof document !== 'undefined' && document.getElementById('create')) {
  new Dashboard(document).start();
}
