export { SynthpanelClient } from './client.js';
export type {
    AnnealStrategy,
    BundleName,
    DifficultyName,
    EpochEntry,
    MixMode,
    MixPlanConfig,
    PanelConfig,
    PanelResult,
    WindowBatch,
    WindowConfig,
} from './types.js';
