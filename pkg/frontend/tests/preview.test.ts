import { describe, expect, it } from 'vitest'
import { previewReport, previewSentence } from '../src/preview.js'
import type { Decision, SentenceView, SpanView } from '../src/types.js'

function sentenceFromWords(index: number, words: string[], terminator = '.'): SentenceView {
  const tokens = []
  let pos = 0
  for (const word of words) {
    tokens.push({
      text: word,
      kind: /^[a-zA-Z]/.test(word) ? ('WORD' as const) : ('PUNCT' as const),
      char_start: pos,
      char_end: pos + word.length,
    })
    pos += word.length + 1
  }
  tokens.push({ text: terminator, kind: 'PUNCT' as const, char_start: pos, char_end: pos + 1 })
  return { index, text: words.join(' ') + terminator, tokens }
}

function span(sentence: number, start: number, end: number, key = 's'): SpanView {
  return {
    key,
    sentence,
    start,
    end,
    keyword: 'prior',
    rule_id: 'bare_keyword',
    color: '#ffe119',
    decision: { state: 'PENDING', replacement: null },
  }
}

const decide = (state: Decision['state'], replacement: string | null = null): Decision => ({
  state,
  replacement,
})

describe('previewSentence', () => {
  it('accepting a whole-sentence span drops the sentence', () => {
    const s = sentenceFromWords(0, ['no', 'interval', 'change', 'from', 'prior', 'CT'])
    const sp = span(0, 0, 7)
    const decisions = new Map([[sp.key, decide('ACCEPT')]])
    expect(previewSentence(s, [sp], decisions)).toBeNull()
  })

  it('replacing shows the typed substitution', () => {
    const s = sentenceFromWords(0, ['heart', 'size', 'is', 'stable'])
    const sp = span(0, 0, 4)
    const decisions = new Map([[sp.key, decide('REPLACED', 'heart size is abnormal')]])
    expect(previewSentence(s, [sp], decisions)).toBe('Heart size is abnormal.')
  })

  it('rejecting leaves the sentence unchanged', () => {
    const s = sentenceFromWords(0, ['heart', 'size', 'is', 'stable'])
    const sp = span(0, 3, 4)
    const decisions = new Map([[sp.key, decide('REJECT')]])
    expect(previewSentence(s, [sp], decisions)).toBe(s.text)
  })

  it('pending spans keep their tokens', () => {
    const s = sentenceFromWords(0, ['heart', 'size', 'is', 'stable'])
    const sp = span(0, 3, 4)
    expect(previewSentence(s, [sp], new Map())).toBe(s.text)
  })

  it('accepting a partial span removes just those tokens', () => {
    const s = sentenceFromWords(0, ['lungs', 'are', 'clear', 'again'])
    const sp = span(0, 3, 4)
    const decisions = new Map([[sp.key, decide('ACCEPT')]])
    expect(previewSentence(s, [sp], decisions)).toBe('Lungs are clear.')
  })
})

describe('previewReport', () => {
  it('joins surviving sentences and skips dropped ones', () => {
    const s0 = sentenceFromWords(0, ['no', 'acute', 'process'])
    const s1 = sentenceFromWords(1, ['no', 'interval', 'change'])
    const sp = span(1, 0, 4, 'k1')
    const decisions = new Map([[sp.key, decide('ACCEPT')]])
    expect(previewReport([s0, s1], [sp], decisions)).toBe('no acute process.')
  })
})
