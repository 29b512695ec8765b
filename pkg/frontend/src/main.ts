import { ApiClient } from './api.js'
import { installKeyboard } from './keyboard.js'
import { AppState } from './state.js'
import { downloadText, render, ViewCallbacks } from './view.js'

function promptReplacement(current: string | null): string | null {
  return window.prompt('Replacement text for this span:', current ?? '')
}

export function bootstrap(doc: Document): AppState {
  const state = new AppState(new ApiClient(''))
  const root = doc.getElementById('app')
  if (!root) throw new Error('missing #app container')

  const callbacks: ViewCallbacks = {
    openReport: (id) => void state.openReport(id),
    setFilter: (pendingOnly) => state.setFilter(pendingOnly),
    focusSpan: (index) => {
      state.focusedSpan = index
      render(doc, root, state.snapshot(), callbacks)
    },
    retry: () => void state.loadCorpus(),
    exportCorpus: () =>
      void state.exportCorpus().then((result) => {
        if (result.pending_spans > 0) {
          window.alert(`Export finished with ${result.pending_spans} span(s) still pending.`)
        }
        downloadText(doc, 'ground_truth.jsonl', result.content)
      }),
  }

  state.subscribe((snapshot) => render(doc, root, snapshot, callbacks))
  installKeyboard(window, {
    accept: () => void state.decide('accept'),
    reject: () => void state.decide('reject'),
    beginReplace: () => {
      if (!state.report || !state.report.spans.length) return
      const span = state.report.spans[state.focusedSpan]
      const text = promptReplacement(state.decisionFor(span.key).replacement)
      if (text !== null) void state.decide('replace', text)
    },
    next: () => state.focusDelta(1),
    prev: () => state.focusDelta(-1),
  })

  void state.loadCorpus()
  return state
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  bootstrap(document)
}
