//! Local relabelings that fix a game, and the variable orbits they induce.
//!
//! A relabeling moves player `i` to seat `players[i]`, renames its input by
//! `inputs[i]` and its output (given its input `x_i`) by `outputs[i][x_i]`.
//! Such maps send NS and SNOS correlations to NS and SNOS correlations, so
//! when they also fix `T` and `V` an optimal strategy may be averaged over the
//! group they generate and the LP can be restricted to orbit-constant points.

use crate::game::{round_permutation_map, Game, Radix, Scenario, SubsetIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Relabeling {
    players: Vec<usize>,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<Vec<usize>>>,
}

impl Relabeling {
    fn identity(scenario: &Scenario) -> Self {
        let players = (0..scenario.players()).collect();
        let inputs = scenario.inputs().iter().map(|&n| (0..n).collect()).collect();
        let outputs = scenario
            .inputs()
            .iter()
            .zip(scenario.outputs())
            .map(|(&n, &m)| vec![(0..m).collect(); n])
            .collect();
        Relabeling { players, inputs, outputs }
    }

    fn is_identity(&self, scenario: &Scenario) -> bool {
        *self == Relabeling::identity(scenario)
    }

    /// `(new player, new input, new output)` for player `i` answering `a`
    /// to `x`.
    fn image(&self, i: usize, x: usize, a: usize) -> (usize, usize, usize) {
        (self.players[i], self.inputs[i][x], self.outputs[i][x][a])
    }

    /// Image of every flat `(a̲, x̲)` entry.
    pub(crate) fn entry_map(&self, scenario: &Scenario) -> Vec<usize> {
        let (ir, or) = (scenario.input_radix(), scenario.output_radix());
        let k = scenario.players();
        let (mut xs, mut as_) = (vec![0; k], vec![0; k]);
        let (mut nx, mut na) = (vec![0; k], vec![0; k]);
        let mut map = Vec::with_capacity(scenario.table_len());
        for x in 0..scenario.input_count() {
            ir.decode_into(x, &mut xs);
            for a in 0..scenario.output_count() {
                or.decode_into(a, &mut as_);
                for i in 0..k {
                    let (p, xi, ai) = self.image(i, xs[i], as_[i]);
                    nx[p] = xi;
                    na[p] = ai;
                }
                map.push(scenario.entry(or.encode(&na), ir.encode(&nx)));
            }
        }
        map
    }

    /// Image subset and the image of every `x_I·|A_I| + a_I` index.
    pub(crate) fn marginal_map(&self, scenario: &Scenario, subset: &SubsetIndex) -> (SubsetIndex, Vec<usize>) {
        let members = subset.members();
        let image_members: Vec<usize> = members.iter().map(|&i| self.players[i]).collect();
        let image = SubsetIndex::new(scenario.players(), &image_members).expect("player permutation keeps strictness");
        let sorted = image.members();
        let radix = |ms: &[usize], sizes: &[usize]| Radix::new(ms.iter().map(|&i| sizes[i]).collect());
        let (xr, ar) = (radix(&members, scenario.inputs()), radix(&members, scenario.outputs()));
        let (ixr, iar) = (radix(&sorted, scenario.inputs()), radix(&sorted, scenario.outputs()));
        let k = members.len();
        let (mut xs, mut as_) = (vec![0; k], vec![0; k]);
        let (mut nx, mut na) = (vec![0; k], vec![0; k]);
        let mut map = Vec::with_capacity(xr.len() * ar.len());
        for x in 0..xr.len() {
            xr.decode_into(x, &mut xs);
            for a in 0..ar.len() {
                ar.decode_into(a, &mut as_);
                for (slot, &i) in members.iter().enumerate() {
                    let (p, xi, ai) = self.image(i, xs[slot], as_[slot]);
                    let pos = sorted.binary_search(&p).expect("image member");
                    nx[pos] = xi;
                    na[pos] = ai;
                }
                map.push(ixr.encode(&nx) * iar.len() + iar.encode(&na));
            }
        }
        (image, map)
    }

    /// Applies `self` to round `round` of an `n`-round product of `base`.
    fn lift(&self, base: &Scenario, round: usize, n: usize) -> Relabeling {
        let k = base.players();
        let mut inputs = Vec::with_capacity(k);
        let mut outputs = Vec::with_capacity(k);
        for i in 0..k {
            let xr = Radix::new(vec![base.inputs()[i]; n]);
            let ar = Radix::new(vec![base.outputs()[i]; n]);
            let mut per_input = Vec::with_capacity(xr.len());
            let mut input_map = Vec::with_capacity(xr.len());
            for x in 0..xr.len() {
                let mut xd = xr.decode(x);
                let d = xd[round];
                let output_map = (0..ar.len())
                    .map(|a| {
                        let mut ad = ar.decode(a);
                        ad[round] = self.outputs[i][d][ad[round]];
                        ar.encode(&ad)
                    })
                    .collect();
                per_input.push(output_map);
                xd[round] = self.inputs[i][d];
                input_map.push(xr.encode(&xd));
            }
            inputs.push(input_map);
            outputs.push(per_input);
        }
        Relabeling { players: self.players.clone(), inputs, outputs }
    }

    /// Fixes `T` and `V`.
    fn fixes(&self, game: &Game, entries: &[usize]) -> bool {
        let scenario = game.scenario();
        let na = scenario.output_count();
        let t = game.distribution();
        let v = game.predicate();
        (0..scenario.input_count()).all(|x| t[entries[x * na] / na] == t[x])
            && entries.iter().enumerate().all(|(e, &img)| v[img] == v[e])
    }
}

/// Generator candidates on a single-round scenario.
fn base_candidates(scenario: &Scenario) -> Vec<Relabeling> {
    let k = scenario.players();
    let id = Relabeling::identity(scenario);
    let mut out = Vec::new();
    let max_out = scenario.outputs().iter().copied().max().unwrap_or(1);
    let max_in = scenario.inputs().iter().copied().max().unwrap_or(1);
    for a in 0..max_out {
        for b in a + 1..max_out {
            // every player, every input
            if scenario.outputs().iter().all(|&m| m > b) {
                let mut g = id.clone();
                g.outputs.iter_mut().flatten().for_each(|p| p.swap(a, b));
                out.push(g);
                for x in 0..max_in {
                    if scenario.inputs().iter().all(|&n| n > x) {
                        let mut g = id.clone();
                        g.outputs.iter_mut().for_each(|per| per[x].swap(a, b));
                        out.push(g);
                    }
                }
            }
            for i in (0..k).filter(|&i| scenario.outputs()[i] > b) {
                let mut g = id.clone();
                g.outputs[i].iter_mut().for_each(|p| p.swap(a, b));
                out.push(g);
                for x in 0..scenario.inputs()[i] {
                    let mut g = id.clone();
                    g.outputs[i][x].swap(a, b);
                    out.push(g);
                }
            }
        }
    }
    for i in 0..k {
        for x in 0..scenario.inputs()[i] {
            for y in x + 1..scenario.inputs()[i] {
                let mut g = id.clone();
                g.inputs[i].swap(x, y);
                out.push(g);
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if scenario.inputs()[i] == scenario.inputs()[j] && scenario.outputs()[i] == scenario.outputs()[j] {
                let mut g = id.clone();
                g.players.swap(i, j);
                out.push(g);
            }
        }
    }
    out
}

fn candidates(game: &Game) -> Vec<Relabeling> {
    let scenario = game.scenario();
    let Some(rounds) = game.rounds().filter(|r| r.count > 1) else {
        return base_candidates(scenario);
    };
    let (base, n) = (&rounds.base, rounds.count);
    let mut out = Vec::new();
    for r in 0..n - 1 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(r, r + 1);
        let k = scenario.players();
        let inputs: Vec<Vec<usize>> = (0..k).map(|i| round_permutation_map(base.inputs()[i], n, &perm)).collect();
        let outputs = (0..k)
            .map(|i| vec![round_permutation_map(base.outputs()[i], n, &perm); scenario.inputs()[i]])
            .collect();
        out.push(Relabeling { players: (0..k).collect(), inputs, outputs });
    }
    for g in base_candidates(base) {
        if g.players.iter().enumerate().any(|(i, &p)| i != p) {
            // Player swaps act on all rounds at once.
            let mut lifted = Relabeling::identity(scenario);
            lifted.players = g.players.clone();
            out.push(lifted);
        } else {
            for r in 0..n {
                out.push(g.lift(base, r, n));
            }
        }
    }
    out
}

/// Union-find over a variable range.
struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Orbits of raw LP variables: `P` entries first, then one block per listed
/// subset holding `M_I(a_I, x_I)`.
pub(crate) struct Orbits {
    /// Orbit id per raw variable, numbered by smallest member.
    pub(crate) orbit: Vec<usize>,
}

pub(crate) fn orbits(game: &Game, subsets: &[SubsetIndex], offsets: &[usize], total: usize) -> Orbits {
    let scenario = game.scenario();
    let mut partition = Partition::new(total);
    for g in candidates(game) {
        if g.is_identity(scenario) {
            continue;
        }
        let entries = g.entry_map(scenario);
        if !g.fixes(game, &entries) {
            continue;
        }
        for (e, &img) in entries.iter().enumerate() {
            partition.union(e, img);
        }
        for (s, subset) in subsets.iter().enumerate() {
            let (image, map) = g.marginal_map(scenario, subset);
            let target = subsets.iter().position(|t| *t == image).expect("subset family closed under players");
            for (m, &img) in map.iter().enumerate() {
                partition.union(offsets[s] + m, offsets[target] + img);
            }
        }
    }
    let mut id = vec![usize::MAX; total];
    let mut orbit = Vec::with_capacity(total);
    let mut count = 0;
    for v in 0..total {
        let root = partition.find(v);
        if id[root] == usize::MAX {
            id[root] = count;
            count += 1;
        }
        orbit.push(id[root]);
    }
    Orbits { orbit }
}
