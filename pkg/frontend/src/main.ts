import { Api } from './api.js';
import { EventStream } from './events.js';
import { RecognitionFeed } from './feed.js';
import { StatusIndicator } from './indicator.js';
import { KbBrowser } from './kbBrowser.js';
import { RecordFlow } from './recordFlow.js';
import { SpectrogramView, QUALITY_COLUMN_RATES, type Quality } from './spectrogram.js';
import type { ServiceEvent } from './types.js';

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element as T;
}

export function wireUp(): void {
  const api = new Api();
  const spectrogram = new SpectrogramView(byId<HTMLCanvasElement>('spectrogram'));
  const feed = new RecognitionFeed(byId('feed'));
  const indicator = new StatusIndicator(byId('status-square'));
  const browser = new KbBrowser(api, byId('kb'));
  const recorder = new RecordFlow(api, byId('record'), () => void browser.refresh());
  const banner = byId('disconnect-banner');
  const modeLabel = byId('session-mode');

  const stream = new EventStream(
    `ws://${location.host}/ws/events`,
  );

  stream.onConnection((connected) => {
    banner.hidden = connected;
  });

  stream.onEvent((event: ServiceEvent) => {
    switch (event.kind) {
      case 'spectrogram_column':
        spectrogram.pushColumn(event.payload);
        break;
      case 'recognition_result':
        feed.push(event.payload);
        break;
      case 'delay_warning':
        indicator.warn(event.payload.lag_s);
        break;
      case 'pending_label_request':
        recorder.captured(event.payload);
        break;
      case 'detection_state':
        modeLabel.dataset.capture = event.payload.state;
        break;
    }
  });

  byId('auto-start').addEventListener('click', () => void api.startAuto());
  byId('manual-start').addEventListener('click', () => void api.startManual());
  byId('session-stop').addEventListener('click', () => void api.stopSession());

  const quality = byId<HTMLSelectElement>('quality');
  quality.addEventListener('change', () => {
    // forwarded to the service as configuration on its next start
    const rate = QUALITY_COLUMN_RATES[quality.value as Quality];
    modeLabel.dataset.columnsPerSecond = String(rate);
  });

  const refreshMode = async () => {
    const state = await api.session();
    modeLabel.textContent = state.mode;
  };
  setInterval(() => void refreshMode(), 1000);

  stream.connect();
  void browser.refresh();
  void refreshMode();
}

if (typeof document !== 'undefined' && document.getElementById('spectrogram')) {
  wireUp();
}
