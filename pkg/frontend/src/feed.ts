import type { RecognitionResult } from './types.js';

// Importance is communicated by color first (image-first presentation):
// usual = black, important = blue, urgent = red.
export const IMPORTANCE_COLORS: Record<string, string> = {
  usual: '#000000',
  important: '#1040c0',
  urgent: '#c01010',
};

export const FEED_CAPACITY = 500; // mirrors the service's history bound
const PAGE_SIZE = 25;

export function rowColor(result: RecognitionResult): string {
  return IMPORTANCE_COLORS[result.importance] ?? IMPORTANCE_COLORS.usual;
}

export function rowLabel(result: RecognitionResult): string {
  if (result.level === 0) return 'unrecognized';
  return `${result.class_name} (level ${result.level})`;
}

function formatTime(seconds: number): string {
  const m = Math.floor(seconds / 60);
  const s = (seconds % 60).toFixed(1).padStart(4, '0');
  return `${m}:${s}`;
}

/**
 * Live list of recognition results, newest first.
 *
 * Holds at most FEED_CAPACITY rows and renders the newest page; a
 * "load earlier" control pages backwards. Suppressed (ignore) results
 * never enter the feed.
 */
export class RecognitionFeed {
  private results: RecognitionResult[] = [];
  private visiblePages = 1;

  constructor(private root: HTMLElement) {}

  get size(): number {
    return this.results.length;
  }

  push(result: RecognitionResult): void {
    if (result.display_state === 'suppressed') return;
    this.results.push(result);
    if (this.results.length > FEED_CAPACITY) this.results.shift();
    this.render();
  }

  loadEarlier(): void {
    this.visiblePages += 1;
    this.render();
  }

  clear(): void {
    this.results = [];
    this.visiblePages = 1;
    this.render();
  }

  render(): void {
    this.root.replaceChildren();
    const visible = Math.min(this.results.length, this.visiblePages * PAGE_SIZE);
    const newestFirst = this.results.slice(this.results.length - visible).reverse();
    for (const result of newestFirst) {
      this.root.appendChild(this.buildRow(result));
    }
    if (visible < this.results.length) {
      const more = document.createElement('button');
      more.className = 'feed-load-earlier';
      more.textContent = 'load earlier';
      more.addEventListener('click', () => this.loadEarlier());
      this.root.appendChild(more);
    }
  }

  private buildRow(result: RecognitionResult): HTMLElement {
    const row = document.createElement('div');
    row.className = 'feed-row';
    row.style.backgroundColor = rowColor(result);
    row.style.color = '#ffffff';
    row.dataset.importance = result.importance;
    row.dataset.level = String(result.level);

    const time = document.createElement('span');
    time.className = 'feed-time';
    time.textContent = formatTime(result.timestamp);

    const label = document.createElement('span');
    label.className = 'feed-label';
    label.textContent = rowLabel(result);

    row.append(time, label);
    return row;
  }
}
