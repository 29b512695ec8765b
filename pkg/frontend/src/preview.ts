import type { Decision, SentenceView, SpanView } from './types.js'

const NO_SPACE_BEFORE = new Set(['.', ',', ';', ':', '!', '?', ')', ']', '}', "'"])
const CLAUSE_PUNCT = new Set([',', ';', ':'])
const TERMINAL = new Set(['.', '!', '?'])

function joinPieces(pieces: string[]): string {
  const parts: string[] = []
  for (const piece of pieces) {
    if (parts.length && (NO_SPACE_BEFORE.has(piece[0]) || '([{'.includes(parts[parts.length - 1].slice(-1)))) {
      parts[parts.length - 1] += piece
    } else {
      parts.push(piece)
    }
  }
  return parts.join(' ')
}

/**
 * Client-side approximation of the export for one sentence: accepted
 * spans vanish, replaced spans show the typed text, rejected and
 * pending spans keep the original tokens.  Returns null when the
 * sentence would be dropped entirely.
 */
export function previewSentence(
  sentence: SentenceView,
  spans: SpanView[],
  decisions: Map<string, Decision>,
): string | null {
  const drop = new Set<number>()
  const replacements = new Map<number, string>()
  let modified = false
  for (const span of spans) {
    if (span.sentence !== sentence.index) continue
    const decision = decisions.get(span.key) ?? span.decision
    if (decision.state === 'ACCEPT') {
      for (let i = span.start; i < span.end; i++) drop.add(i)
      modified = true
    } else if (decision.state === 'REPLACED') {
      for (let i = span.start; i < span.end; i++) drop.add(i)
      replacements.set(span.start, decision.replacement ?? '')
      modified = true
    }
  }
  if (!modified) return sentence.text

  const pieces: string[] = []
  let hasContent = false
  sentence.tokens.forEach((token, i) => {
    const replacement = replacements.get(i)
    if (replacement) {
      pieces.push(replacement)
      hasContent = true
    }
    if (!drop.has(i)) {
      pieces.push(token.text)
      if (token.kind === 'WORD' || token.kind === 'NUMBER') hasContent = true
    }
  })
  if (!hasContent) return null

  // tidy the surface the same way the scrubber does
  while (pieces.length && CLAUSE_PUNCT.has(pieces[0])) pieces.shift()
  const collapsed: string[] = []
  for (const piece of pieces) {
    const prev = collapsed[collapsed.length - 1]
    if (prev !== undefined && prev.length === 1 && CLAUSE_PUNCT.has(prev) && (CLAUSE_PUNCT.has(piece) || TERMINAL.has(piece))) {
      collapsed[collapsed.length - 1] = piece
      continue
    }
    collapsed.push(piece)
  }
  while (collapsed.length && CLAUSE_PUNCT.has(collapsed[collapsed.length - 1])) collapsed.pop()
  if (!collapsed.length) return null

  let text = joinPieces(collapsed)
  const first = text.search(/[a-zA-Z]/)
  if (first >= 0) {
    text = text.slice(0, first) + text[first].toUpperCase() + text.slice(first + 1)
  }
  if (!TERMINAL.has(text[text.length - 1])) text += '.'
  return text
}

export function previewReport(
  sentences: SentenceView[],
  spans: SpanView[],
  decisions: Map<string, Decision>,
): string {
  const texts: string[] = []
  for (const sentence of sentences) {
    const text = previewSentence(sentence, spans, decisions)
    if (text !== null && text !== '') texts.push(text)
  }
  return texts.join(' ')
}
