import type { Api } from './api.js';
import type { PendingLabelPayload } from './types.js';

export type RecordPhase = 'idle' | 'listening' | 'labeling' | 'saving';

/**
 * Record-and-label workflow: start a recording session, wait for the
 * service to capture a segment (pending_label_request), then show the
 * label form. Saving with an empty class name is rejected inline;
 * cancel discards the capture.
 */
export class RecordFlow {
  phase: RecordPhase = 'idle';
  private capture: PendingLabelPayload | null = null;

  constructor(
    private api: Api,
    private root: HTMLElement,
    private onSaved: (recordId: string) => void = () => {},
  ) {
    this.render();
  }

  async start(): Promise<void> {
    await this.api.startRecording();
    this.phase = 'listening';
    this.capture = null;
    this.render();
  }

  /** The event stream saw a pending_label_request for this session. */
  captured(payload: PendingLabelPayload): void {
    if (this.phase !== 'listening') return;
    this.capture = payload;
    this.phase = 'labeling';
    this.render();
  }

  async save(className: string, environment: string): Promise<void> {
    if (!className.trim()) {
      this.showError('a sound needs a name');
      return;
    }
    this.phase = 'saving';
    try {
      const saved = await this.api.labelRecording(
        className.trim(),
        environment.trim() || undefined,
      );
      this.phase = 'idle';
      this.capture = null;
      this.render();
      this.onSaved(saved.record_id);
    } catch (err) {
      this.phase = 'labeling';
      this.showError(err instanceof Error ? err.message : String(err));
    }
  }

  async cancel(): Promise<void> {
    await this.api.cancelRecording();
    this.phase = 'idle';
    this.capture = null;
    this.render();
  }

  private showError(message: string): void {
    const box = this.root.querySelector<HTMLElement>('.record-error');
    if (box) {
      box.textContent = message;
      box.hidden = false;
    }
  }

  render(): void {
    this.root.replaceChildren();
    this.root.dataset.phase = this.phase;

    if (this.phase === 'idle') {
      const start = document.createElement('button');
      start.className = 'record-start';
      start.textContent = 'record a sound';
      start.addEventListener('click', () => void this.start());
      this.root.appendChild(start);
      return;
    }

    if (this.phase === 'listening') {
      const hint = document.createElement('p');
      hint.className = 'record-hint';
      hint.textContent = 'listening — make the sound now';
      this.root.appendChild(hint);
      return;
    }

    // labeling / saving
    const form = document.createElement('form');
    form.className = 'record-label-form';

    const duration = document.createElement('p');
    duration.className = 'record-duration';
    duration.textContent = this.capture
      ? `captured ${this.capture.duration.toFixed(2)} s of sound`
      : 'captured a sound';

    const name = document.createElement('input');
    name.className = 'record-name';
    name.placeholder = 'sound name';

    const environment = document.createElement('input');
    environment.className = 'record-environment';
    environment.placeholder = 'environment (optional)';

    const error = document.createElement('p');
    error.className = 'record-error';
    error.hidden = true;

    const save = document.createElement('button');
    save.type = 'submit';
    save.className = 'record-save';
    save.textContent = 'save';

    const cancel = document.createElement('button');
    cancel.type = 'button';
    cancel.className = 'record-cancel';
    cancel.textContent = 'discard';
    cancel.addEventListener('click', () => void this.cancel());

    form.addEventListener('submit', (e) => {
      e.preventDefault();
      void this.save(name.value, environment.value);
    });

    form.append(duration, name, environment, error, save, cancel);
    this.root.appendChild(form);
  }
}
