//! Generator of graphs with a planted unique maximum independent set and
//! many degenerate, 2-flip-connected local minima one size below it.
//!
//! Steps, for parameters `(n, e_initial, m)`:
//!
//! 1. Random graph: `e_initial` distinct edges drawn uniformly.
//! 2. Depth-first search for an independent set `M` of size `m`.
//! 3. Every node outside `M` with no neighbor in `M` gets an edge to a
//!    uniformly chosen member of `M`, making `M` maximal.
//! 4. Resume the search until another size-`m` independent set `S` turns up;
//!    drop one node of `S` to get `M'`.
//! 5. Every node outside `M'` with no neighbor in `M'` gets an edge to a
//!    uniformly chosen member of `M'`; for members of `M` the endpoint is
//!    drawn from `M' \ M` so that `M` stays independent.
//! 6. Repeat 4-5 until the search is exhausted. `M` is then the only
//!    independent set of size `m` and the unique MIS.
//!
//! The dropped node in step 4 is uniform over `S` when `|S \ M| >= 2`, and
//! uniform over `S ∩ M` otherwise. Dropping the only node of `S \ M` would
//! leave `M' ⊂ M`, and step 5 would then have no legal endpoint for the
//! remaining member of `M`.

use alloc::string::ToString;
use alloc::vec::Vec;
use rand::Rng;

use super::enumerate::{IndependentSetSearch, SearchStep};
use super::{GeneratorParams, Graph, NodeSet, ProblemInstance, DEFAULT_PENALTY};
use crate::rng::{self, StreamRng};
use crate::{Error, Result};

/// DFS nodes expanded between two polls of the abort callback.
const POLL_INTERVAL: u64 = 1 << 14;

/// Knobs for [`generate_hard_instance_with`].
pub struct GeneratorOptions<'a> {
    /// Penalty constant `c` stored in the instance.
    pub penalty: f64,
    /// Polled during the search; returning `true` abandons generation.
    pub should_abort: Option<&'a dyn Fn() -> bool>,
}

impl Default for GeneratorOptions<'_> {
    fn default() -> Self {
        GeneratorOptions {
            penalty: DEFAULT_PENALTY,
            should_abort: None,
        }
    }
}

/// Runs the generator once for `seed` with default options.
pub fn generate_hard_instance(params: GeneratorParams, seed: u64) -> Result<ProblemInstance> {
    generate_hard_instance_with(params, seed, &GeneratorOptions::default())
}

pub fn generate_hard_instance_with(
    params: GeneratorParams,
    seed: u64,
    opts: &GeneratorOptions<'_>,
) -> Result<ProblemInstance> {
    let GeneratorParams { n, e_initial, m } = params;
    let max_edges = n * n.saturating_sub(1) / 2;
    if m > n || e_initial > max_edges {
        return Err(Error::input(alloc::format!(
            "need m <= n and e_initial <= n(n-1)/2, got n={n} e_initial={e_initial} m={m}"
        )));
    }
    let mut rng = rng::stream(seed, rng::streams::GENERATOR);
    let mut g = random_graph(n, e_initial, &mut rng)?;

    let mut search = IndependentSetSearch::new(m);
    let mis = match next_found(&mut search, &g, opts)? {
        Some(s) => s,
        None => {
            return Err(Error::Generation(alloc::format!(
                "no independent set of size {m} in the initial graph"
            )))
        }
    };
    cover_outsiders(&mut g, mis, |_| mis, &mut rng)?;

    loop {
        let found = loop {
            match next_found(&mut search, &g, opts)? {
                Some(s) if s == mis => continue,
                other => break other,
            }
        };
        let Some(other) = found else { break };
        let outside = other.difference(mis);
        let pool = if outside.len() >= 2 {
            other
        } else {
            other.intersection(mis)
        };
        let dropped = pick(pool, &mut rng);
        let reduced = other.flipped(dropped);
        let fresh = reduced.difference(mis);
        if fresh.is_empty() {
            return Err(Error::Generation("no endpoint outside the MIS for step 5".to_string()));
        }
        cover_outsiders(
            &mut g,
            reduced,
            |i| if mis.contains(i) { fresh } else { reduced },
            &mut rng,
        )?;
    }

    ProblemInstance::with_metadata(g, opts.penalty, Some(mis), seed, Some(params))
}

/// Retries [`generate_hard_instance_with`] on seeds derived from `root_seed`
/// until one succeeds. Returns the instance and the number of attempts.
/// Only [`Error::Generation`] failures are retried.
pub fn generate_with_retries(
    params: GeneratorParams,
    root_seed: u64,
    max_attempts: u32,
    opts: &GeneratorOptions<'_>,
) -> Result<(ProblemInstance, u32)> {
    let mut last = Error::Generation("no attempts made".to_string());
    for attempt in 0..max_attempts {
        let seed = if attempt == 0 {
            root_seed
        } else {
            rng::derive_seed(root_seed, attempt as u64)
        };
        match generate_hard_instance_with(params, seed, opts) {
            Ok(inst) => return Ok((inst, attempt + 1)),
            Err(e @ Error::Generation(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn next_found(search: &mut IndependentSetSearch, g: &Graph, opts: &GeneratorOptions<'_>) -> Result<Option<NodeSet>> {
    loop {
        match search.step(g, POLL_INTERVAL) {
            SearchStep::Found(s) => return Ok(Some(s)),
            SearchStep::Exhausted => return Ok(None),
            SearchStep::Paused => {
                if opts.should_abort.is_some_and(|f| f()) {
                    return Err(Error::Generation("aborted: generation budget exhausted".to_string()));
                }
            }
        }
    }
}

fn random_graph(n: usize, edges: usize, rng: &mut StreamRng) -> Result<Graph> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    // partial Fisher-Yates: the first `edges` slots become a uniform sample
    for k in 0..edges {
        let r = rng.random_range(k..pairs.len());
        pairs.swap(k, r);
    }
    let mut g = Graph::new(n)?;
    for &(i, j) in &pairs[..edges] {
        g.add_edge(i, j)?;
    }
    Ok(g)
}

/// Connects every node with no neighbor in `set` (and not in it) to a
/// uniformly chosen node of `endpoints(node)`.
fn cover_outsiders(
    g: &mut Graph,
    set: NodeSet,
    endpoints: impl Fn(usize) -> NodeSet,
    rng: &mut StreamRng,
) -> Result<()> {
    let n = g.node_count();
    for i in 0..n {
        if set.contains(i) || !g.neighbors(i).intersection(set).is_empty() {
            continue;
        }
        let pool = endpoints(i);
        if pool.is_empty() {
            return Err(Error::Generation(alloc::format!("no legal endpoint for node {i}")));
        }
        let j = pick(pool, rng);
        g.add_edge(i, j)?;
    }
    Ok(())
}

fn pick(pool: NodeSet, rng: &mut StreamRng) -> usize {
    let k = rng.random_range(0..pool.len());
    pool.iter().nth(k).expect("index below pool size")
}
