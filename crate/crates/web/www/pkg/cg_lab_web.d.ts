/* tslint:disable */
/* eslint-disable */

/**
 * Rows `[n, r, a, b, d, C_n, K(n, c)]` flattened, for `n_min ≤ n ≤ n_max`.
 */
export function constants_table(n_min: number, n_max: number, c: number): Float64Array;

/**
 * `K(n, c)`, or NaN outside the region where it is defined.
 */
export function k_bound(n: number, c: number): number;

/**
 * Row-major `c_steps × k_steps` grid of bit flags: 1 stated region,
 * 2 leading-coefficient region, 4 positive on the sampled box, 8 boundary band.
 */
export function region_grid(n: number, c_min: number, c_max: number, c_steps: number, k_min: number, k_max: number, k_steps: number, samples: number, seed: number): Uint8Array;

/**
 * `s^A` along `F = 0` at `|Z| = i·z_max/(steps−1)`, or along `Z = 0` when `along_f`.
 */
export function scalar_profile(n: number, c: number, k: number, z_max: number, steps: number, along_f: boolean): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly constants_table: (a: number, b: number, c: number) => [number, number, number, number];
    readonly k_bound: (a: number, b: number) => [number, number, number];
    readonly region_grid: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly scalar_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
