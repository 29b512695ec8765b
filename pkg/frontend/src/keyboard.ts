// Keyboard-driven review: A accepts, R rejects, E opens the replacement
// box, arrows / j / k move focus.  Keystrokes inside form fields are
// left alone so typing a replacement never triggers review actions.

export interface KeyboardActions {
  accept(): void
  reject(): void
  beginReplace(): void
  next(): void
  prev(): void
}

const FIELD_TAGS = new Set(['INPUT', 'TEXTAREA', 'SELECT'])

export function handleReviewKey(event: KeyboardEvent, actions: KeyboardActions): boolean {
  const target = event.target as HTMLElement | null
  if (target && (FIELD_TAGS.has(target.tagName) || target.isContentEditable)) {
    return false
  }
  switch (event.key.toLowerCase()) {
    case 'a':
      actions.accept()
      return true
    case 'r':
      actions.reject()
      return true
    case 'e':
      actions.beginReplace()
      return true
    case 'j':
    case 'arrowdown':
      actions.next()
      return true
    case 'k':
    case 'arrowup':
      actions.prev()
      return true
    default:
      return false
  }
}

export function installKeyboard(window: Window, actions: KeyboardActions): () => void {
  const handler = (event: KeyboardEvent) => {
    if (handleReviewKey(event, actions)) {
      event.preventDefault()
    }
  }
  window.addEventListener('keydown', handler)
  return () => window.removeEventListener('keydown', handler)
}
