import type { CorpusEntry, DecisionVerb, ExportResult, ReportView } from './types.js'

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message)
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText
    try {
      const body = await response.json()
      if (body && typeof body.error === 'string') detail = body.error
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail)
  }
  return (await response.json()) as T
}

/** Thin typed client over the review service; all state lives server-side. */
export class ApiClient {
  constructor(
    private base: string = '',
    private fetchImpl: typeof fetch = fetch,
  ) {}

  getCorpus(): Promise<CorpusEntry[]> {
    return this.fetchImpl(this.base + '/api/v1/corpus').then((r) => asJson<CorpusEntry[]>(r))
  }

  getReport(id: string): Promise<ReportView> {
    return this.fetchImpl(this.base + '/api/v1/reports/' + encodeURIComponent(id)).then((r) =>
      asJson<ReportView>(r),
    )
  }

  async postDecision(
    reportId: string,
    spanKey: string,
    decision: DecisionVerb,
    replacement?: string,
  ): Promise<void> {
    const url =
      this.base +
      '/api/v1/reports/' +
      encodeURIComponent(reportId) +
      '/spans/' +
      encodeURIComponent(spanKey) +
      '/decision'
    const response = await this.fetchImpl(url, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(replacement === undefined ? { decision } : { decision, replacement }),
    })
    if (!response.ok) {
      throw new ApiError(response.status, 'decision rejected by server')
    }
  }

  exportCorpus(): Promise<ExportResult> {
    return this.fetchImpl(this.base + '/api/v1/export', { method: 'POST' }).then((r) =>
      asJson<ExportResult>(r),
    )
  }
}
