// The processing status square: blue while the engine keeps up with the
// audio stream, orange/ocher after a delay warning.

export const INDICATOR_OK = '#1040c0';
export const INDICATOR_LAGGING = '#d08020';

const RECOVERY_MS = 3000;

export class StatusIndicator {
  private recoveryTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private element: HTMLElement,
    private recoveryMs = RECOVERY_MS,
  ) {
    this.reset();
  }

  get lagging(): boolean {
    return this.element.dataset.lagging === 'true';
  }

  /** A delay_warning event arrived: flip to orange until things recover. */
  warn(lagSeconds: number): void {
    this.element.style.backgroundColor = INDICATOR_LAGGING;
    this.element.dataset.lagging = 'true';
    this.element.title = `processing lags by ${lagSeconds.toFixed(2)} s`;
    if (this.recoveryTimer !== null) clearTimeout(this.recoveryTimer);
    this.recoveryTimer = setTimeout(() => this.reset(), this.recoveryMs);
  }

  reset(): void {
    this.element.style.backgroundColor = INDICATOR_OK;
    this.element.dataset.lagging = 'false';
    this.element.title = 'processing keeps up';
    if (this.recoveryTimer !== null) {
      clearTimeout(this.recoveryTimer);
      this.recoveryTimer = null;
    }
  }
}
