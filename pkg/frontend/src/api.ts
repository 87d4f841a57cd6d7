// Client for the translation service JSON API.

export interface TranslateEdit {
  start: number;
  end: number;
  original: string;
  replacement: string;
  category: string;
}

export interface TranslateSegment {
  kind: 'matched' | 'substituted' | 'dropped' | 'unknown';
  words: string[];
  entry_id: string | null;
  image_ref: string | null;
  similarity?: number;
}

export interface TranslateResponse {
  input?: string;
  corrected: string;
  edits: TranslateEdit[];
  segments: TranslateSegment[];
  images: string[];
  session: string;
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export function pictogramUrl(apiBase: string, entryId: string): string {
  return `${apiBase}/api/pictograms/${encodeURIComponent(entryId)}`;
}

export async function translate(
  apiBase: string,
  text: string,
  session: string | null,
  fetchFn: FetchLike = fetch,
): Promise<TranslateResponse> {
  let response: Response;
  try {
    response = await fetchFn(`${apiBase}/api/translate`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(session ? { text, session } : { text }),
    });
  } catch (err) {
    throw new ApiError(`service unreachable: ${String(err)}`, null);
  }
  if (!response.ok) {
    let detail = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) detail = `${detail}: ${body.error}`;
    } catch {
      // non-JSON error body: keep the status line
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as TranslateResponse;
}
