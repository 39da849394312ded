/* tslint:disable */
/* eslint-disable */

export function bundled_tasks(): string;

/**
 * Compiles a DIMACS CNF and counts models, then conditions on each
 * assumption literal in turn and reports the shrinking counts.
 */
export function count_models(dimacs: string, assumptions: string): string;

/**
 * Generates random walks on a bundled task, degrades them into `token_type`
 * tokens and runs `method` on the result. Returns the first trace as seen by
 * the learner followed by the learned model.
 */
export function observe_and_learn(task: string, length: number, count: number, token_type: string, percent_missing: number, flip_prob: number, method: string, seed: bigint): string;

/**
 * Recommendation report as text. An empty taxonomy means the shipped one;
 * empty preferences mean the taxonomy's own list.
 */
export function recommend_profile(taxonomy: string, preferences: string, neighbors: number): string;

export function shipped_taxonomy(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bundled_tasks: () => [number, number];
    readonly count_models: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly observe_and_learn: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: bigint) => [number, number, number, number];
    readonly recommend_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly shipped_taxonomy: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
