// Payload shapes for the /api/v1 review service.

export type DecisionState = 'PENDING' | 'ACCEPT' | 'REJECT' | 'REPLACED'

export interface Decision {
  state: DecisionState
  replacement: string | null
}

export interface CorpusEntry {
  id: string
  span_count: number
  pending_count: number
  decided_count: number
}

export interface TokenView {
  text: string
  kind: 'WORD' | 'NUMBER' | 'PUNCT' | 'BLANK'
  char_start: number
  char_end: number
}

export interface SentenceView {
  index: number
  text: string
  tokens: TokenView[]
}

export interface SpanView {
  key: string
  sentence: number
  start: number
  end: number
  keyword: string
  rule_id: string
  color: string
  decision: Decision
}

export interface ReportView {
  id: string
  sentences: SentenceView[]
  spans: SpanView[]
}

export interface ExportResult {
  pending_spans: number
  content: string
  path?: string
}

export type DecisionVerb = 'accept' | 'reject' | 'replace'
