/* tslint:disable */
/* eslint-disable */

/**
 * Disc through the seed `ζ` for `A = a` (`linear = false`) or
 * `A = a z` (`linear = true`). Returns the image curves followed by the
 * Picard iteration count.
 */
export function disc_curves(a: number, linear: boolean): Float64Array;

/**
 * First component of the family disc `z(c, t)` with `c = (0, c2)`,
 * `t = (1, t2)` over the edge `x_j = eps |y|²`.
 */
export function family_disc(eps: number, c2: number, t2: number): Float64Array;

/**
 * Ray limits of `(−z₁)^i` at the edge point `(i y1, i y2)` along `dirs`
 * directions. Returns `[verdict, re, im, oracle_re, oracle_im,
 * error_bar, per-direction re/im …]`, verdict 0 = nontangential,
 * 1 = directional, 2 = none; missing values are NaN.
 */
export function fatou_probe(y1: number, y2: number, dirs: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly disc_curves: (a: number, b: number) => [number, number, number, number];
    readonly family_disc: (a: number, b: number, c: number) => [number, number, number, number];
    readonly fatou_probe: (a: number, b: number, c: number) => [number, number];
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
