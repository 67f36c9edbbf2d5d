/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const constantNames: () => [number, number];
export const materialConstants: (a: number, b: number, c: number) => [number, number, number, number];
export const threePointCurves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const weightTraces: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
