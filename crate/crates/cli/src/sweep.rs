//! Parallel per-`q` evaluation with ordered, single-threaded consumption.

use std::collections::VecDeque;

use anyhow::{anyhow, Result};
use rayon::prelude::*;

const BLOCK: u64 = 1 << 14;

pub struct Sweep {
    pool: rayon::ThreadPool,
}

impl Sweep {
    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(anyhow!("--threads must be at least 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?;
        Ok(Self { pool })
    }

    /// `f` applied to each of `inputs`, in order.
    pub fn map<T, F>(&self, inputs: &[u64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
    {
        self.pool
            .install(|| inputs.par_iter().map(|&q| f(q)).collect())
    }

    /// `f(1), f(2), …, f(last)`, computed a block at a time.
    pub fn stream<T, F>(&self, last: u64, f: F) -> Stream<'_, T, F>
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
    {
        Stream {
            sweep: self,
            f,
            next: 1,
            last,
            buffer: VecDeque::new(),
        }
    }
}

pub struct Stream<'a, T, F> {
    sweep: &'a Sweep,
    f: F,
    next: u64,
    last: u64,
    buffer: VecDeque<T>,
}

impl<T, F> Iterator for Stream<'_, T, F>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    type Item = T;

    fn next(&mut self) -> Option<T> {
        if self.buffer.is_empty() && self.next <= self.last {
            let end = self.last.min(self.next + BLOCK - 1);
            let f = &self.f;
            let block: Vec<T> = self
                .sweep
                .pool
                .install(|| (self.next..=end).into_par_iter().map(f).collect());
            self.buffer.extend(block);
            self.next = end + 1;
        }
        self.buffer.pop_front()
    }
}
