/* tslint:disable */
/* eslint-disable */

/**
 * Monte Carlo mean of `|Wₙ|` next to the exact distance chain.
 */
export function escape_curve(rank: number, steps: number, walks: number, seed: bigint): string;

/**
 * δ and ρ of ℓᵖ in the plane, with ρ predicted from the dual space.
 */
export function moduli_curves(p: number, points: number, restarts: number): string;

/**
 * ψ and φ for the radial equation; `forcing` is `const:<v>` or
 * `band:<a>,<b>:<period>`.
 */
export function radial_profile(field: string, n: number, forcing: string, r_max: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly escape_curve: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly moduli_curves: (a: number, b: number, c: number) => [number, number, number, number];
    readonly radial_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
