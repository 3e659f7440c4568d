import { beforeEach, describe, expect, it } from 'vitest';

import { Api } from '../src/api.js';
import { KbBrowser } from '../src/kbBrowser.js';
import { MockService } from './mockService.js';

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

describe('KbBrowser', () => {
  let service: MockService;
  let root: HTMLElement;
  let browser: KbBrowser;

  beforeEach(() => {
    service = new MockService();
    service.install();
    root = document.createElement('div');
    browser = new KbBrowser(new Api(), root);
  });

  it('lists sounds alphabetically with record counts', async () => {
    service.addRecord('kettle', 'kitchen');
    service.addRecord('kettle', 'kitchen');
    service.addRecord('doorbell');

    await browser.refresh();
    const entries = [...root.querySelectorAll<HTMLElement>('.kb-sound')];
    expect(entries.map((e) => e.dataset.name)).toEqual(['doorbell', 'kettle']);
    expect(
      entries.map((e) => e.querySelector('.kb-sound-name')!.textContent),
    ).toEqual(['doorbell (1)', 'kettle (2)']);
  });

  it('changing the importance selector persists and re-renders', async () => {
    service.addRecord('kettle');
    await browser.refresh();

    const select = root.querySelector<HTMLSelectElement>(
      '.kb-sound[data-name="kettle"] .kb-importance',
    )!;
    select.value = 'urgent';
    select.dispatchEvent(new Event('change'));
    await flush();

    expect(service.classes.get('kettle')!.importance).toBe('urgent');
    const refreshed = root.querySelector<HTMLSelectElement>(
      '.kb-sound[data-name="kettle"] .kb-importance',
    )!;
    expect(refreshed.value).toBe('urgent');
  });

  it('the exclusion checkbox persists through the API', async () => {
    service.addRecord('kettle');
    await browser.refresh();

    const box = root.querySelector<HTMLInputElement>('.kb-excluded')!;
    box.checked = true;
    box.dispatchEvent(new Event('change'));
    await flush();

    expect(service.classes.get('kettle')!.excluded).toBe(true);
  });

  it('expands a sound to its records and deletes one', async () => {
    const keep = service.addRecord('kettle', 'kitchen');
    const drop = service.addRecord('kettle', 'garage');
    await browser.refresh();

    root.querySelector<HTMLButtonElement>('.kb-sound-name')!.click();
    await flush();
    let records = [...root.querySelectorAll<HTMLElement>('.kb-record')];
    expect(records.map((r) => r.dataset.id)).toEqual([keep, drop]);

    records[1].querySelector<HTMLButtonElement>('.kb-delete-record')!.click();
    await flush();

    expect(service.recordCount()).toBe(1);
    records = [...root.querySelectorAll<HTMLElement>('.kb-record')];
    expect(records.map((r) => r.dataset.id)).toEqual([keep]);
  });

  it('groups records by environment with unlabeled under "(none)"', async () => {
    service.addRecord('kettle', 'kitchen');
    service.addRecord('doorbell', 'kitchen');
    service.addRecord('alarm');
    await browser.refresh();

    root.querySelector<HTMLButtonElement>('.kb-group-toggle')!.click();
    await flush();

    const sections = [...root.querySelectorAll<HTMLElement>('.kb-environment')];
    const byName = new Map(
      sections.map((s) => [s.dataset.environment, s.querySelector('h3')!.textContent]),
    );
    expect(byName.get('kitchen')).toBe('kitchen (2)');
    expect(byName.get('(none)')).toBe('(none) (1)');
  });

  it('renders an empty knowledge base as just the toggle', async () => {
    await browser.refresh();
    expect(root.querySelectorAll('.kb-sound')).toHaveLength(0);
    expect(root.querySelector('.kb-group-toggle')).not.toBeNull();
  });
});
