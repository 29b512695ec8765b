import { colorForKeyword } from './colors.js'
import { previewReport } from './preview.js'
import type { AppSnapshot } from './state.js'
import type { Decision, ReportView } from './types.js'

export interface ViewCallbacks {
  openReport(id: string): void
  setFilter(pendingOnly: boolean): void
  focusSpan(index: number): void
  retry(): void
  exportCorpus(): void
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag)
  if (className) node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

function decisionBadge(doc: Document, decision: Decision): HTMLElement {
  const badge = el(doc, 'span', 'badge badge-' + decision.state.toLowerCase(), decision.state)
  if (decision.state === 'REPLACED' && decision.replacement) {
    badge.title = decision.replacement
  }
  return badge
}

function renderBrowser(doc: Document, root: HTMLElement, snapshot: AppSnapshot, cb: ViewCallbacks): void {
  const panel = el(doc, 'section', 'browser')
  panel.appendChild(el(doc, 'h2', undefined, 'Reports'))

  const filterLabel = el(doc, 'label', 'filter')
  const checkbox = el(doc, 'input') as HTMLInputElement
  checkbox.type = 'checkbox'
  checkbox.checked = snapshot.filterPending
  checkbox.addEventListener('change', () => cb.setFilter(checkbox.checked))
  filterLabel.appendChild(checkbox)
  filterLabel.appendChild(doc.createTextNode(' only reports with pending spans'))
  panel.appendChild(filterLabel)

  const visible = snapshot.filterPending
    ? snapshot.corpus.filter((e) => e.pending_count > 0)
    : snapshot.corpus
  if (!visible.length) {
    panel.appendChild(el(doc, 'p', 'empty-state', 'No reports to review.'))
  } else {
    const list = el(doc, 'ul', 'report-list')
    for (const entry of visible) {
      const item = el(doc, 'li', 'report-item')
      if (snapshot.report && snapshot.report.id === entry.id) item.classList.add('open')
      const link = el(doc, 'a', 'report-link', entry.id)
      link.href = '#'
      link.addEventListener('click', (event) => {
        event.preventDefault()
        cb.openReport(entry.id)
      })
      item.appendChild(link)
      item.appendChild(
        el(doc, 'span', 'counts', ` ${entry.pending_count} pending / ${entry.span_count} spans`),
      )
      list.appendChild(item)
    }
    panel.appendChild(list)
  }
  root.appendChild(panel)
}

function renderSentence(
  doc: Document,
  report: ReportView,
  sentenceIndex: number,
  snapshot: AppSnapshot,
  cb: ViewCallbacks,
): HTMLElement {
  const sentence = report.sentences[sentenceIndex]
  const container = el(doc, 'p', 'sentence')
  const spans = report.spans
    .map((s, i) => ({ span: s, index: i }))
    .filter(({ span }) => span.sentence === sentenceIndex)
    .sort((a, b) => a.span.start - b.span.start)

  let cursor = 0
  const pushPlain = (from: number, to: number) => {
    if (to <= from) return
    const text = sentence.tokens
      .slice(from, to)
      .map((t) => t.text)
      .join(' ')
    container.appendChild(doc.createTextNode(' ' + text + ' '))
  }
  for (const { span, index } of spans) {
    pushPlain(cursor, span.start)
    const mark = el(doc, 'mark', 'span-highlight')
    mark.dataset.spanKey = span.key
    mark.style.backgroundColor = span.color || colorForKeyword(span.keyword)
    if (index === snapshot.focusedSpan) mark.classList.add('focused')
    mark.textContent = sentence.tokens.slice(span.start, span.end).map((t) => t.text).join(' ')
    mark.title = `${span.keyword} (${span.rule_id})`
    mark.addEventListener('click', () => cb.focusSpan(index))
    mark.appendChild(decisionBadge(doc, snapshot.decisions.get(span.key) ?? span.decision))
    container.appendChild(mark)
    cursor = span.end
  }
  pushPlain(cursor, sentence.tokens.length)
  return container
}

function renderReport(doc: Document, root: HTMLElement, snapshot: AppSnapshot, cb: ViewCallbacks): void {
  const panel = el(doc, 'section', 'report')
  if (!snapshot.report) {
    panel.appendChild(el(doc, 'p', 'empty-state', 'Open a report to start reviewing.'))
    root.appendChild(panel)
    return
  }
  const report = snapshot.report
  panel.appendChild(el(doc, 'h2', undefined, report.id))
  panel.appendChild(
    el(doc, 'p', 'hint', 'A accept · R reject · E replace · j/k move between spans'),
  )
  for (let i = 0; i < report.sentences.length; i++) {
    panel.appendChild(renderSentence(doc, report, i, snapshot, cb))
  }

  const preview = el(doc, 'div', 'preview')
  preview.appendChild(el(doc, 'h3', undefined, 'Preview'))
  preview.appendChild(
    el(doc, 'p', 'preview-text', previewReport(report.sentences, report.spans, snapshot.decisions)),
  )
  panel.appendChild(preview)
  root.appendChild(panel)
}

function renderExport(doc: Document, root: HTMLElement, snapshot: AppSnapshot, cb: ViewCallbacks): void {
  const panel = el(doc, 'section', 'export')
  const pending = snapshot.corpus.reduce((sum, e) => sum + e.pending_count, 0)
  if (pending > 0) {
    panel.appendChild(el(doc, 'p', 'warning', `${pending} pending span(s) will be kept as-is.`))
  }
  const button = el(doc, 'button', 'export-button', 'Export ground truth')
  button.addEventListener('click', () => cb.exportCorpus())
  panel.appendChild(button)
  root.appendChild(panel)
}

export function render(doc: Document, root: HTMLElement, snapshot: AppSnapshot, cb: ViewCallbacks): void {
  root.textContent = ''
  if (snapshot.banner) {
    const banner = el(doc, 'div', 'banner', snapshot.banner + ' ')
    const retry = el(doc, 'button', 'retry', 'Retry')
    retry.addEventListener('click', () => cb.retry())
    banner.appendChild(retry)
    root.appendChild(banner)
  }
  renderBrowser(doc, root, snapshot, cb)
  renderReport(doc, root, snapshot, cb)
  renderExport(doc, root, snapshot, cb)
}

export function downloadText(doc: Document, filename: string, content: string): void {
  const blob = new Blob([content], { type: 'application/json' })
  const url = URL.createObjectURL(blob)
  const link = doc.createElement('a')
  link.href = url
  link.download = filename
  link.click()
  URL.revokeObjectURL(url)
}
