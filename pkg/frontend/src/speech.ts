// Browser speech capture as progressive enhancement: when the API is
// missing the mic control never appears and typing is the only input.

type RecognitionCtor = new () => SpeechRecognitionLike;

interface SpeechRecognitionLike {
  lang: string;
  interimResults: boolean;
  maxAlternatives: number;
  onresult: ((event: { results: { 0: { 0: { transcript: string } } } }) => void) | null;
  onend: (() => void) | null;
  onerror: ((event: unknown) => void) | null;
  start(): void;
  stop(): void;
}

export function speechRecognitionAvailable(win: Window = window): boolean {
  const w = win as unknown as Record<string, unknown>;
  return Boolean(w.SpeechRecognition || w.webkitSpeechRecognition);
}

export interface DictationHandle {
  stop(): void;
}

export function startDictation(
  onTranscript: (text: string) => void,
  onDone: () => void,
  win: Window = window,
): DictationHandle | null {
  const w = win as unknown as Record<string, unknown>;
  const Ctor = (w.SpeechRecognition || w.webkitSpeechRecognition) as RecognitionCtor | undefined;
  if (!Ctor) return null;
  const recognition = new Ctor();
  recognition.lang = 'en-US';
  recognition.interimResults = false;
  recognition.maxAlternatives = 1;
  recognition.onresult = (event) => {
    const transcript = event.results[0][0].transcript;
    if (transcript) onTranscript(transcript);
  };
  recognition.onend = onDone;
  recognition.onerror = onDone;
  recognition.start();
  return { stop: () => recognition.stop() };
}
