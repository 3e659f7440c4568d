import type { Api } from './api.js';
import { IMPORTANCE_COLORS } from './feed.js';
import type { Importance, SoundClass } from './types.js';

const IMPORTANCES: Importance[] = ['ignore', 'usual', 'important', 'urgent'];

/**
 * Knowledge-base browser: sounds with expandable record sublists,
 * importance/exclusion editing, record playback and deletion, plus a
 * group-by-environment view (unlabeled records under "(none)").
 */
export class KbBrowser {
  private sounds: SoundClass[] = [];
  private expanded = new Set<string>();
  private groupByEnvironment = false;

  constructor(
    private api: Api,
    private root: HTMLElement,
  ) {}

  async refresh(): Promise<void> {
    this.sounds = await this.api.listSounds();
    this.render();
  }

  async render(): Promise<void> {
    this.root.replaceChildren();

    const toggle = document.createElement('button');
    toggle.className = 'kb-group-toggle';
    toggle.textContent = this.groupByEnvironment ? 'list sounds' : 'group by environment';
    toggle.addEventListener('click', () => {
      this.groupByEnvironment = !this.groupByEnvironment;
      void this.render();
    });
    this.root.appendChild(toggle);

    if (this.groupByEnvironment) {
      await this.renderEnvironmentGroups();
    } else {
      for (const sound of this.sounds) {
        this.root.appendChild(this.buildSoundEntry(sound));
      }
    }
  }

  private async renderEnvironmentGroups(): Promise<void> {
    const { groups } = await this.api.environments();
    for (const [environment, recordIds] of Object.entries(groups)) {
      const section = document.createElement('section');
      section.className = 'kb-environment';
      section.dataset.environment = environment;

      const heading = document.createElement('h3');
      heading.textContent = `${environment} (${recordIds.length})`;
      section.appendChild(heading);
      this.root.appendChild(section);
    }
  }

  private buildSoundEntry(sound: SoundClass): HTMLElement {
    const entry = document.createElement('div');
    entry.className = 'kb-sound';
    entry.dataset.name = sound.name;

    const header = document.createElement('div');
    header.className = 'kb-sound-header';

    const badge = document.createElement('span');
    badge.className = 'kb-importance-badge';
    badge.style.backgroundColor =
      IMPORTANCE_COLORS[sound.importance] ?? '#808080';

    const name = document.createElement('button');
    name.className = 'kb-sound-name';
    name.textContent = `${sound.name} (${sound.records.length})`;
    name.addEventListener('click', () => {
      if (this.expanded.has(sound.name)) this.expanded.delete(sound.name);
      else this.expanded.add(sound.name);
      void this.render();
    });

    const importance = document.createElement('select');
    importance.className = 'kb-importance';
    for (const level of IMPORTANCES) {
      const option = document.createElement('option');
      option.value = level;
      option.textContent = level;
      option.selected = level === sound.importance;
      importance.appendChild(option);
    }
    importance.value = sound.importance;
    importance.addEventListener('change', () => {
      void this.api
        .updateSound(sound.name, { importance: importance.value as Importance })
        .then(() => this.refresh());
    });

    const excluded = document.createElement('input');
    excluded.type = 'checkbox';
    excluded.className = 'kb-excluded';
    excluded.checked = sound.excluded;
    excluded.title = 'exclude from recognition';
    excluded.addEventListener('change', () => {
      void this.api
        .updateSound(sound.name, { excluded: excluded.checked })
        .then(() => this.refresh());
    });

    header.append(badge, name, importance, excluded);
    entry.appendChild(header);

    if (this.expanded.has(sound.name)) {
      entry.appendChild(this.buildRecordList(sound));
    }
    return entry;
  }

  private buildRecordList(sound: SoundClass): HTMLElement {
    const list = document.createElement('ul');
    list.className = 'kb-records';
    for (const record of sound.records) {
      const item = document.createElement('li');
      item.className = 'kb-record';
      item.dataset.id = record.id;

      const text = document.createElement('span');
      text.textContent = record.environment ?? '(none)';

      if (record.has_audio) {
        const play = document.createElement('button');
        play.className = 'kb-play';
        play.textContent = 'play';
        play.addEventListener('click', () => {
          void new Audio(this.api.recordAudioUrl(record.id)).play();
        });
        item.appendChild(play);
      }

      const remove = document.createElement('button');
      remove.className = 'kb-delete-record';
      remove.textContent = 'delete';
      remove.addEventListener('click', () => {
        void this.api.deleteRecord(record.id).then(() => this.refresh());
      });

      item.append(text, remove);
      list.appendChild(item);
    }
    return list;
  }
}
