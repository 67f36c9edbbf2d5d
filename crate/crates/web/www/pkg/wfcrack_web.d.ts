/* tslint:disable */
/* eslint-disable */

export function constantNames(): string[];

/**
 * Material constants for μ₊ = 1, μ₋ = (1 + η)/(1 − η), in [`CONSTANT_NAMES`] order.
 */
export function materialConstants(eta: number, nu_plus: number, nu_minus: number): Float64Array;

/**
 * Rows [b/a, K^S_I, K^S_II, K^A_I, K^A_II] for three-point loading with F = a = 1.
 */
export function threePointCurves(eta: number, nu_plus: number, nu_minus: number, points: number): Float64Array;

/**
 * Rows [x₁, Re/Im ⟦U⟧₁₁, Re/Im ⟦U⟧₁₂, Re/Im ⟨U⟩₁₁, Re/Im ⟨U⟩₁₂] over x₁ ∈ [−x_max, x_max].
 */
export function weightTraces(eta: number, nu_plus: number, nu_minus: number, x_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly constantNames: () => [number, number];
    readonly materialConstants: (a: number, b: number, c: number) => [number, number, number, number];
    readonly threePointCurves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly weightTraces: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
