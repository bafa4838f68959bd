import {
    EpochEntry,
    MixPlanConfig,
    PanelConfig,
    PanelResult,
    WindowBatch,
    WindowConfig,
} from './types.js';

/**
 * HTTP client for a running synthpanel service.
 *
 * Every numeric value is produced by the service and parsed from JSON, so
 * it equals the generator's float64 output exactly; the client never
 * recomputes anything.
 */
export class SynthpanelClient {
    readonly baseUrl: string;

    constructor(baseUrl: string) {
        this.baseUrl = baseUrl.replace(/\/+$/, '');
    }

    private async post<T>(path: string, payload: unknown): Promise<T> {
        const resp = await fetch(`${this.baseUrl}${path}`, {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify(payload),
        });
        if (!resp.ok) {
            const body = await resp.text();
            throw new Error(`${path} failed (${resp.status}): ${body}`);
        }
        return (await resp.json()) as T;
    }

    async health(): Promise<boolean> {
        try {
            const resp = await fetch(`${this.baseUrl}/health`);
            return resp.ok;
        } catch {
            return false;
        }
    }

    /** Version string of the core service this client is talking to. */
    async coreVersion(): Promise<string> {
        const resp = await fetch(`${this.baseUrl}/version`);
        if (!resp.ok) throw new Error(`/version failed (${resp.status})`);
        const body = (await resp.json()) as { version: string };
        return body.version;
    }

    /** Generate one panel; element-wise identical to the CLI's CSV output. */
    async generatePanel(config: PanelConfig): Promise<PanelResult> {
        const body = await this.post<{
            data: number[][];
            difficulty: number;
            channel_meta: Record<string, unknown>[];
            latent: Record<string, unknown> | null;
        }>('/panel', panelPayload(config));
        return {
            data: body.data,
            rows: body.data.length,
            channels: body.data.length ? body.data[0].length : 0,
            difficulty: body.difficulty,
            channelMeta: body.channel_meta,
            latent: body.latent,
        };
    }

    /**
     * Iterate the per-epoch mixing schedule.
     *
     * Yields exactly `epochs` entries with the same counts the planner
     * prints; each entry can fetch its synthetic window batch when the
     * plan carries a panel recipe.
     */
    async *iterEpochs(plan: MixPlanConfig): AsyncGenerator<EpochEntry, void, void> {
        const body = await this.post<{
            epochs: { epoch: number; n_real: number; n_synth: number; ratio: number }[];
        }>('/plan', {
            mode: plan.mode,
            synth_ratio: plan.synthRatio ?? 0.0,
            sparsity: plan.sparsity ?? 1.0,
            strategy: plan.strategy ?? 'gradual',
            anneal_epoch: plan.annealEpoch ?? 0,
            epochs: plan.epochs ?? 10,
            cache_size: plan.cacheSize ?? 0,
            orig_train_size: plan.origTrainSize,
        });
        for (const row of body.epochs) {
            yield {
                epoch: row.epoch,
                nReal: row.n_real,
                nSynth: row.n_synth,
                ratio: row.ratio,
                fetchWindows: (count?: number) =>
                    this.drawWindows(plan, row.epoch, count ?? row.n_synth),
            };
        }
    }

    /** Convenience: the full schedule as an array. */
    async epochSchedule(plan: MixPlanConfig): Promise<EpochEntry[]> {
        const out: EpochEntry[] = [];
        for await (const entry of this.iterEpochs(plan)) out.push(entry);
        return out;
    }

    private async drawWindows(plan: MixPlanConfig, epoch: number, count: number): Promise<WindowBatch> {
        if (!plan.panel) {
            throw new Error('plan has no panel recipe; attach one to fetch window batches');
        }
        const body = await this.post<{
            count: number;
            window_len: number;
            channels: number;
            windows: number[][][];
        }>('/windows', {
            panel: panelPayload(plan.panel),
            cache_size: plan.cacheSize ?? 0,
            epoch,
            count,
            window: windowPayload(plan.window ?? {}),
        });
        return {
            count: body.count,
            windowLen: body.window_len,
            channels: body.channels,
            windows: body.windows,
        };
    }
}

function panelPayload(config: PanelConfig): Record<string, unknown> {
    return {
        seed: config.seed,
        length: config.length,
        channels: config.channels,
        bundle: config.bundle ?? 'all',
        difficulty: config.difficulty ?? 'default',
        latent_prob: config.latentProb ?? 0.0,
        bundle_weights: config.bundleWeights ?? null,
        difficulty_per_channel: config.difficultyPerChannel ?? false,
    };
}

function windowPayload(window: WindowConfig): Record<string, unknown> {
    return {
        input_len: window.inputLen ?? 96,
        label_len: window.labelLen ?? 48,
        horizon: window.horizon ?? 96,
        stride: window.stride ?? 1,
    };
}
