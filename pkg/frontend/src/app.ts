// Single-page chat-style UI: type (or dictate) an utterance, see the
// corrected sentence with its edits marked, and the pictogram row.
// All state lives in memory except the session token (sessionStorage).

import { ApiError, FetchLike, pictogramUrl, translate } from './api';
import { speechRecognitionAvailable, startDictation } from './speech';
import { buildUtteranceView, UtteranceView } from './viewmodel';

const SESSION_KEY = 'pictopipe_session';

export interface AppOptions {
  apiBase?: string;
  fetchFn?: FetchLike;
  now?: () => number;
}

export interface AppHandle {
  submit(): Promise<void>;
  history(): readonly UtteranceView[];
}

function resolveApiBase(doc: Document): string {
  const win = doc.defaultView;
  if (!win) return '';
  const fromQuery = new URLSearchParams(win.location.search || '').get('api');
  if (fromQuery) return fromQuery.replace(/\/$/, '');
  const configured = (win as unknown as { PICTOPIPE_API?: string }).PICTOPIPE_API;
  if (configured) return configured.replace(/\/$/, '');
  if (win.location.origin && win.location.origin !== 'null' && win.location.protocol !== 'file:') {
    return win.location.origin;
  }
  return 'http://127.0.0.1:8075';
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderView(doc: Document, apiBase: string, view: UtteranceView): HTMLElement {
  const item = el(doc, 'article', 'utterance');

  const meta = el(doc, 'div', 'utterance-meta');
  meta.appendChild(el(doc, 'span', 'utterance-input', view.input));
  meta.appendChild(
    el(doc, 'time', 'utterance-time', new Date(view.timestamp).toLocaleTimeString()),
  );
  item.appendChild(meta);

  const corrected = el(doc, 'p', 'corrected');
  for (const part of view.correctedParts) {
    if (part.changed) {
      const mark = el(doc, 'mark', 'edit', part.text);
      if (part.category) mark.title = part.category;
      corrected.appendChild(mark);
    } else {
      corrected.appendChild(doc.createTextNode(part.text));
    }
  }
  item.appendChild(corrected);

  const row = el(doc, 'div', 'picto-row');
  for (const chip of view.chips) {
    if (chip.type === 'image') {
      const fig = el(doc, 'figure', 'picto');
      const img = el(doc, 'img');
      img.src = pictogramUrl(apiBase, chip.entryId);
      img.alt = chip.caption;
      if (chip.detail) img.title = chip.detail;
      img.addEventListener('error', () => {
        // broken image: swap in a placeholder glyph, keep the caption
        const glyph = el(doc, 'div', 'picto-broken', '⁇');
        img.replaceWith(glyph);
      });
      fig.appendChild(img);
      fig.appendChild(el(doc, 'figcaption', undefined, chip.caption));
      row.appendChild(fig);
    } else {
      const chipNode = el(doc, 'div', 'picto picto-unknown');
      chipNode.appendChild(el(doc, 'div', 'picto-unknown-glyph', '?'));
      chipNode.appendChild(el(doc, 'figcaption', undefined, chip.caption));
      row.appendChild(chipNode);
    }
  }
  item.appendChild(row);
  return item;
}

export function initApp(doc: Document, options: AppOptions = {}): AppHandle {
  const apiBase = options.apiBase ?? resolveApiBase(doc);
  const fetchFn = options.fetchFn ?? (doc.defaultView?.fetch.bind(doc.defaultView) as FetchLike);
  const now = options.now ?? Date.now;

  const input = doc.getElementById('utterance') as HTMLInputElement;
  const submitBtn = doc.getElementById('submit') as HTMLButtonElement;
  const micBtn = doc.getElementById('mic') as HTMLButtonElement;
  const historyNode = doc.getElementById('history') as HTMLElement;
  const banner = doc.getElementById('error-banner') as HTMLElement;
  const bannerText = doc.getElementById('error-text') as HTMLElement;
  const retryBtn = doc.getElementById('retry') as HTMLButtonElement;
  const form = doc.getElementById('utterance-form') as HTMLFormElement;

  const history: UtteranceView[] = [];
  let pending = false;

  const storage = doc.defaultView?.sessionStorage;
  const session = {
    get: (): string | null => storage?.getItem(SESSION_KEY) ?? null,
    set: (token: string) => storage?.setItem(SESSION_KEY, token),
  };

  function refreshControls(): void {
    submitBtn.disabled = pending || input.value.trim() === '';
  }

  function showError(message: string): void {
    bannerText.textContent = message;
    banner.hidden = false;
  }

  function clearError(): void {
    banner.hidden = true;
    bannerText.textContent = '';
  }

  async function submit(): Promise<void> {
    const text = input.value.trim();
    if (!text || pending) return;
    pending = true;
    refreshControls();
    try {
      const response = await translate(apiBase, text, session.get(), fetchFn);
      session.set(response.session);
      const view = buildUtteranceView(text, response, now());
      history.push(view);
      historyNode.appendChild(renderView(doc, apiBase, view));
      clearError();
      input.value = '';
    } catch (err) {
      // failed request: keep the input, surface a retry banner, no history
      const detail = err instanceof ApiError ? err.message : String(err);
      showError(`Could not reach the translation service (${detail}).`);
    } finally {
      pending = false;
      refreshControls();
    }
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void submit();
  });
  retryBtn.addEventListener('click', () => void submit());
  input.addEventListener('input', refreshControls);

  if (speechRecognitionAvailable(doc.defaultView as Window)) {
    micBtn.hidden = false;
    micBtn.addEventListener('click', () => {
      micBtn.disabled = true;
      const handle = startDictation(
        (transcript) => {
          input.value = transcript;
          refreshControls();
        },
        () => {
          micBtn.disabled = false;
        },
        doc.defaultView as Window,
      );
      if (!handle) micBtn.disabled = false;
    });
  } else {
    micBtn.hidden = true;
  }

  refreshControls();
  return { submit, history: () => history };
}

// Browser entry point; tests call initApp directly instead.
if (typeof document !== 'undefined' && document.getElementById('utterance-form')) {
  initApp(document);
}
