// One color per keyword head; a pure function so highlights are stable
// across sessions and match the server's palette.

const HEADS = [
  'change',
  'unchanged',
  'prior',
  'stable',
  'interval',
  'previous',
  'again',
  'increased',
  'improve',
  'remain',
  'worse',
  'persistent',
  'removal',
  'similar',
  'earlier',
  'decreased',
  'recurrence',
  'redemonstrate',
]

const PALETTE = [
  '#e6194b', '#3cb44b', '#ffe119', '#4363d8', '#f58231', '#911eb4',
  '#46f0f0', '#f032e6', '#bcf60c', '#fabebe', '#008080', '#e6beff',
  '#9a6324', '#fffac8', '#800000', '#aaffc3', '#808000', '#ffd8b1',
]

export function colorForKeyword(head: string): string {
  const index = HEADS.indexOf(head)
  return index >= 0 ? PALETTE[index % PALETTE.length] : '#cccccc'
}

export function knownHeads(): readonly string[] {
  return HEADS
}
