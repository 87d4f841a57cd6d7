// Pure derivation of the per-utterance view from an API response.
// No DOM access here: everything is snapshot-testable data.

import type { TranslateResponse } from './api';

export interface CorrectedPart {
  text: string;
  changed: boolean;
  category?: string;
}

export type PictoChip =
  | { type: 'image'; caption: string; entryId: string; detail?: string }
  | { type: 'unknown'; caption: string };

export interface UtteranceView {
  input: string;
  corrected: string;
  correctedParts: CorrectedPart[];
  chips: PictoChip[];
  imageCount: number;
  timestamp: number;
}

// Replay the span edits over the source text so the corrected sentence can
// be rendered with its changed regions marked. Falls back to one unmarked
// part if the replay does not reproduce the corrected string.
export function correctedParts(
  input: string | undefined,
  corrected: string,
  edits: TranslateResponse['edits'],
): CorrectedPart[] {
  if (input === undefined || edits.length === 0) {
    return [{ text: corrected, changed: false }];
  }
  const parts: CorrectedPart[] = [];
  let pos = 0;
  for (const edit of edits) {
    if (edit.start < pos) return [{ text: corrected, changed: false }];
    if (edit.start > pos) {
      parts.push({ text: input.slice(pos, edit.start), changed: false });
    }
    if (edit.replacement) {
      parts.push({ text: edit.replacement, changed: true, category: edit.category });
    }
    pos = edit.end;
  }
  if (pos < input.length) {
    parts.push({ text: input.slice(pos), changed: false });
  }
  const replayed = parts.map((p) => p.text).join('');
  if (replayed !== corrected) {
    return [{ text: corrected, changed: false }];
  }
  return parts;
}

// Matched/substituted segments become image chips (sourced from
// /api/pictograms/{id}); unknown segments become placeholder chips with the
// word; dropped segments are omitted entirely.
export function renderSequence(response: TranslateResponse): PictoChip[] {
  const chips: PictoChip[] = [];
  for (const seg of response.segments) {
    const words = seg.words.join(' ');
    if (seg.kind === 'matched' && seg.entry_id) {
      chips.push({ type: 'image', caption: words, entryId: seg.entry_id });
    } else if (seg.kind === 'substituted' && seg.entry_id) {
      const target = seg.entry_id.replace(/_/g, ' ');
      chips.push({
        type: 'image',
        caption: words,
        entryId: seg.entry_id,
        detail: `${words} → ${target}`,
      });
    } else if (seg.kind === 'unknown') {
      chips.push({ type: 'unknown', caption: words });
    }
  }
  return chips;
}

export function buildUtteranceView(
  input: string,
  response: TranslateResponse,
  timestamp: number,
): UtteranceView {
  const chips = renderSequence(response);
  return {
    input,
    corrected: response.corrected,
    correctedParts: correctedParts(response.input ?? input, response.corrected, response.edits),
    chips,
    imageCount: chips.filter((c) => c.type === 'image').length,
    timestamp,
  };
}
