/** Request/response shapes mirroring the service's JSON schemas. */

export type BundleName = 'st' | 'nr' | 'lm' | 've' | 'all';
export type DifficultyName = 'default' | 'uniform' | 'easy' | 'medium' | 'hard';
export type MixMode = 'real' | 'mixed' | 'anneal' | 'anneal_inverse';
export type AnnealStrategy = 'hard' | 'gradual';

export interface PanelConfig {
    seed: number;
    length: number;
    channels: number;
    bundle?: BundleName;
    difficulty?: DifficultyName;
    latentProb?: number;
    bundleWeights?: number[];
    difficultyPerChannel?: boolean;
}

export interface PanelResult {
    /** Row-major T x D matrix; values are bit-identical to the core's output. */
    data: number[][];
    rows: number;
    channels: number;
    difficulty: number;
    channelMeta: Record<string, unknown>[];
    latent: Record<string, unknown> | null;
}

export interface MixPlanConfig {
    mode: MixMode;
    synthRatio?: number;
    sparsity?: number;
    strategy?: AnnealStrategy;
    annealEpoch?: number;
    epochs?: number;
    cacheSize?: number;
    origTrainSize: number;
    /** Attach a generator recipe to make epoch window batches fetchable. */
    panel?: PanelConfig;
    window?: WindowConfig;
}

export interface WindowConfig {
    inputLen?: number;
    labelLen?: number;
    horizon?: number;
    stride?: number;
}

export interface EpochEntry {
    epoch: number;
    nReal: number;
    nSynth: number;
    ratio: number;
    /** Resolves the synthetic window batch for this epoch; requires a panel recipe on the plan. */
    fetchWindows: (count?: number) => Promise<WindowBatch>;
}

export interface WindowBatch {
    count: number;
    windowLen: number;
    channels: number;
    /** count x windowLen x channels. */
    windows: number[][][];
}
