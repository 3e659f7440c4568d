// Wire types for the service's REST API and WebSocket event feed.
// The UI is a pure client: every value here is displayed, never recomputed.

export type Importance = 'ignore' | 'usual' | 'important' | 'urgent';
export type CaptureState = 'monitor' | 'active';
export type SessionMode =
  | 'idle'
  | 'recording'
  | 'manual_recognition'
  | 'auto_recognition';

export interface RecognitionResult {
  timestamp: number;
  class_name: string;
  posterior: number;
  g: number;
  level: number; // 0 = unrecognized .. 5 = highest confidence
  importance: Importance;
  display_state: 'shown' | 'suppressed';
}

export interface ColumnPayload {
  timestamp: number;
  state: CaptureState;
  values_b64: string; // 1024 bytes, 8-bit quantized magnitudes
}

export interface DetectionStatePayload {
  state: CaptureState;
  timestamp: number;
}

export interface DelayWarningPayload {
  lag_s: number;
  timestamp: number;
}

export interface PendingLabelPayload {
  timestamp: number;
  duration: number;
}

export type ServiceEvent =
  | { seq: number; kind: 'spectrogram_column'; payload: ColumnPayload }
  | { seq: number; kind: 'detection_state'; payload: DetectionStatePayload }
  | { seq: number; kind: 'recognition_result'; payload: RecognitionResult }
  | { seq: number; kind: 'delay_warning'; payload: DelayWarningPayload }
  | { seq: number; kind: 'pending_label_request'; payload: PendingLabelPayload };

export interface RecordSummary {
  id: string;
  environment: string | null;
  created_at: number;
  has_audio: boolean;
}

export interface SoundClass {
  name: string;
  importance: Importance;
  excluded: boolean;
  records: RecordSummary[];
}

export interface SessionState {
  mode: SessionMode;
  pending_label: boolean;
  last_result: RecognitionResult | null;
  kb_revision: number;
}

export interface EnvironmentGroups {
  environments: string[];
  groups: Record<string, string[]>; // environment (or "(none)") -> record ids
}
