import { ApiClient } from './api.js'
import type { CorpusEntry, Decision, DecisionVerb, ExportResult, ReportView } from './types.js'

export interface AppSnapshot {
  corpus: CorpusEntry[]
  filterPending: boolean
  report: ReportView | null
  decisions: Map<string, Decision>
  focusedSpan: number
  banner: string | null
}

type Listener = (snapshot: AppSnapshot) => void

const VERB_TO_STATE: Record<DecisionVerb, Decision['state']> = {
  accept: 'ACCEPT',
  reject: 'REJECT',
  replace: 'REPLACED',
}

/**
 * All review state in one store: the corpus listing, the open report,
 * and the per-span decision map.  Decisions update optimistically and
 * roll back if the server refuses them; nothing here survives a reload,
 * which is the point: after refresh the UI shows exactly the session
 * state the server acknowledged.
 */
export class AppState {
  corpus: CorpusEntry[] = []
  filterPending = false
  report: ReportView | null = null
  decisions = new Map<string, Decision>()
  focusedSpan = 0
  banner: string | null = null

  private listeners: Listener[] = []

  constructor(public api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener)
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener)
    }
  }

  private notify(): void {
    const snapshot = this.snapshot()
    for (const listener of this.listeners) listener(snapshot)
  }

  snapshot(): AppSnapshot {
    return {
      corpus: this.corpus,
      filterPending: this.filterPending,
      report: this.report,
      decisions: this.decisions,
      focusedSpan: this.focusedSpan,
      banner: this.banner,
    }
  }

  visibleCorpus(): CorpusEntry[] {
    return this.filterPending ? this.corpus.filter((e) => e.pending_count > 0) : this.corpus
  }

  async loadCorpus(): Promise<void> {
    try {
      this.corpus = await this.api.getCorpus()
      this.banner = null
    } catch (error) {
      this.banner = 'Cannot reach the review service: ' + String(error)
    }
    this.notify()
  }

  async openReport(id: string): Promise<void> {
    try {
      const report = await this.api.getReport(id)
      this.report = report
      this.decisions = new Map(report.spans.map((s) => [s.key, s.decision]))
      this.focusedSpan = 0
      this.banner = null
    } catch (error) {
      this.banner = 'Cannot load report: ' + String(error)
    }
    this.notify()
  }

  setFilter(pendingOnly: boolean): void {
    this.filterPending = pendingOnly
    this.notify()
  }

  focusDelta(delta: number): void {
    if (!this.report || !this.report.spans.length) return
    const n = this.report.spans.length
    this.focusedSpan = (this.focusedSpan + delta + n) % n
    this.notify()
  }

  decisionFor(spanKey: string): Decision {
    return this.decisions.get(spanKey) ?? { state: 'PENDING', replacement: null }
  }

  pendingInReport(): number {
    if (!this.report) return 0
    return this.report.spans.filter((s) => this.decisionFor(s.key).state === 'PENDING').length
  }

  /** Optimistic decision: the UI flips immediately and rolls back when
   * the server rejects the write. */
  async decide(verb: DecisionVerb, replacement?: string): Promise<boolean> {
    if (!this.report || !this.report.spans.length) return false
    const span = this.report.spans[this.focusedSpan]
    const reportId = this.report.id
    const previous = this.decisionFor(span.key)
    const wasPending = previous.state === 'PENDING'
    this.decisions.set(span.key, {
      state: VERB_TO_STATE[verb],
      replacement: verb === 'replace' ? replacement ?? '' : null,
    })
    this.bumpPending(reportId, wasPending ? -1 : 0)
    this.notify()
    try {
      await this.api.postDecision(reportId, span.key, verb, replacement)
      return true
    } catch (error) {
      this.decisions.set(span.key, previous)
      this.bumpPending(reportId, wasPending ? +1 : 0)
      this.banner = 'Decision rejected, rolled back: ' + String(error)
      this.notify()
      return false
    }
  }

  private bumpPending(reportId: string, delta: number): void {
    if (!delta) return
    const entry = this.corpus.find((e) => e.id === reportId)
    if (entry) {
      entry.pending_count += delta
      entry.decided_count -= delta
    }
  }

  exportCorpus(): Promise<ExportResult> {
    return this.api.exportCorpus()
  }
}
