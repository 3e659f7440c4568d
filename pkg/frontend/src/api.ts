import type {
  EnvironmentGroups,
  Importance,
  SessionState,
  SoundClass,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

async function request<T>(
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const init: RequestInit = { method };
  if (body !== undefined) {
    init.headers = { 'content-type': 'application/json' };
    init.body = JSON.stringify(body);
  }
  const response = await fetch(path, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const parsed = await response.json();
      detail = parsed.detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  if (response.status === 204) return undefined as T;
  return (await response.json()) as T;
}

/** Thin typed wrapper over the service's REST endpoints. */
export class Api {
  listSounds(): Promise<SoundClass[]> {
    return request('GET', '/api/sounds');
  }

  createSound(name: string, importance: Importance = 'usual'): Promise<SoundClass> {
    return request('POST', '/api/sounds', { name, importance });
  }

  updateSound(
    name: string,
    patch: { importance?: Importance; excluded?: boolean; new_name?: string },
  ): Promise<SoundClass> {
    return request('PATCH', `/api/sounds/${encodeURIComponent(name)}`, patch);
  }

  deleteSound(name: string): Promise<void> {
    return request('DELETE', `/api/sounds/${encodeURIComponent(name)}`);
  }

  deleteRecord(recordId: string): Promise<void> {
    return request('DELETE', `/api/records/${encodeURIComponent(recordId)}`);
  }

  recordAudioUrl(recordId: string): string {
    return `/api/records/${encodeURIComponent(recordId)}/audio`;
  }

  environments(): Promise<EnvironmentGroups> {
    return request('GET', '/api/environments');
  }

  session(): Promise<SessionState> {
    return request('GET', '/api/session');
  }

  startRecording(): Promise<{ mode: string }> {
    return request('POST', '/api/session/record/start', {});
  }

  labelRecording(className: string, environment?: string): Promise<{ record_id: string }> {
    const body: Record<string, string> = { class_name: className };
    if (environment) body.environment = environment;
    return request('POST', '/api/session/record/label', body);
  }

  cancelRecording(): Promise<void> {
    return request('POST', '/api/session/record/cancel');
  }

  startAuto(environment?: string): Promise<{ mode: string }> {
    return request('POST', '/api/session/auto/start', environment ? { environment } : {});
  }

  startManual(environment?: string): Promise<{ mode: string }> {
    return request('POST', '/api/session/manual/start', environment ? { environment } : {});
  }

  stopSession(): Promise<{ mode: string }> {
    return request('POST', '/api/session/stop', {});
  }
}
