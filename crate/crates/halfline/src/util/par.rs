//! Deterministic row-parallel fill for dense kernel assembly.
//!
//! Worker count is capped by the `HALFLINE_THREADS` environment variable
//! (default: available parallelism). Each worker owns a disjoint row range,
//! so the output is bit-identical regardless of the thread count.

pub fn max_threads() -> usize {
    std::env::var("HALFLINE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Fill `out` (length `rows * row_len`) by calling `fill(i, row_slice)` for
/// each row `i`, spreading rows over threads in contiguous chunks.
pub fn fill_rows<T, F>(out: &mut [T], rows: usize, row_len: usize, fill: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    assert_eq!(out.len(), rows * row_len);
    let workers = max_threads().min(rows.max(1));
    if workers <= 1 {
        for (i, row) in out.chunks_mut(row_len).enumerate() {
            fill(i, row);
        }
        return;
    }
    let chunk_rows = rows.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, chunk) in out.chunks_mut(chunk_rows * row_len).enumerate() {
            let fill = &fill;
            scope.spawn(move || {
                for (r, row) in chunk.chunks_mut(row_len).enumerate() {
                    fill(w * chunk_rows + r, row);
                }
            });
        }
    });
}
