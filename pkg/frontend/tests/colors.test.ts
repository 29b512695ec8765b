import { describe, expect, it } from 'vitest'
import { colorForKeyword, knownHeads } from '../src/colors.js'

describe('colorForKeyword', () => {
  it('is a pure function: same head, same color', () => {
    for (const head of knownHeads()) {
      expect(colorForKeyword(head)).toBe(colorForKeyword(head))
    }
  })

  it('assigns distinct colors to all 18 heads', () => {
    const colors = knownHeads().map(colorForKeyword)
    expect(new Set(colors).size).toBe(18)
  })

  it('falls back to grey for unknown heads', () => {
    expect(colorForKeyword('nonsense')).toBe('#cccccc')
  })

  it('returns hex colors', () => {
    for (const head of knownHeads()) {
      expect(colorForKeyword(head)).toMatch(/^#[0-9a-f]{6}$/)
    }
  })
})
