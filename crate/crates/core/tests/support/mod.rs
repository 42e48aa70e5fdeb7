//! Independent oracles: explicit permutations, Young's orthogonal form,
//! border strips read off Young diagrams, and tuple enumeration.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use subgrowth_core::fuchsian::FuchsianSignature;

pub type Perm = Vec<u8>;

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current: Perm = (0..n as u8).collect();
    heap_permute(n, &mut current, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, a: &mut Perm, out: &mut Vec<Perm>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

/// `S_n` with a full multiplication table; `(a * b)(x) = a(b(x))`.
pub struct SymmetricGroup {
    pub n: usize,
    pub elements: Vec<Perm>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    pub identity: usize,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Self {
        assert!(n <= 6, "multiplication table only for n <= 6");
        let elements = all_perms(n);
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let size = elements.len();
        let mut mul = vec![0u16; size * size];
        let mut inv = vec![0u16; size];
        for (i, a) in elements.iter().enumerate() {
            let mut ai = vec![0u8; n];
            for (x, &y) in a.iter().enumerate() {
                ai[y as usize] = x as u8;
            }
            inv[i] = index[&ai] as u16;
            for (j, b) in elements.iter().enumerate() {
                let ab: Perm = b.iter().map(|&x| a[x as usize]).collect();
                mul[i * size + j] = index[&ab] as u16;
            }
        }
        let identity = index[&(0..n as u8).collect::<Perm>()];
        Self { n, elements, mul, inv, identity }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut r = self.identity;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn cycle_type(&self, a: usize) -> Vec<usize> {
        let p = &self.elements[a];
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// `(f * g)(h) = sum_{ab = h} f(a) g(b)`.
    pub fn convolve(&self, f: &[u128], g: &[u128]) -> Vec<u128> {
        let mut out = vec![0u128; self.order()];
        for (a, &fa) in f.iter().enumerate() {
            if fa == 0 {
                continue;
            }
            for (b, &gb) in g.iter().enumerate() {
                if gb != 0 {
                    out[self.mul(a, b)] += fa * gb;
                }
            }
        }
        out
    }

    fn order_dividing(&self, m: u64) -> Vec<u128> {
        (0..self.order()).map(|a| u128::from(self.pow(a, m) == self.identity)).collect()
    }

    fn commutators(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.order()];
        for a in 0..self.order() {
            for b in 0..self.order() {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                out[c] += 1;
            }
        }
        out
    }

    fn squares(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.order()];
        for a in 0..self.order() {
            out[self.mul(a, a)] += 1;
        }
        out
    }

    /// Generator-tuple solutions of the defining relation
    /// `x_1..x_d y_1..y_s z_1..z_t [a_1,b_1]..[a_g,b_g] = 1` (or `a_1^2..a_g^2`
    /// for non-oriented signatures), counted by convolving the distribution of
    /// each factor of the relator.
    pub fn hom_count(&self, sig: &FuchsianSignature) -> u128 {
        let mut dist = vec![0u128; self.order()];
        dist[self.identity] = 1;
        for &m in sig.periods() {
            dist = self.convolve(&dist, &self.order_dividing(m));
        }
        let free = vec![1u128; self.order()];
        for _ in 0..sig.cusps() + sig.boundary() {
            dist = self.convolve(&dist, &free);
        }
        let handle = if sig.oriented() { self.commutators() } else { self.squares() };
        for _ in 0..sig.genus() {
            dist = self.convolve(&dist, &handle);
        }
        dist[self.identity]
    }

    fn is_transitive(&self, gens: &[usize]) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.elements[g][x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Transitive solutions of the defining relation, by enumerating every
    /// generator tuple. Exponential in the number of generators.
    pub fn transitive_hom_count(&self, sig: &FuchsianSignature) -> u128 {
        self.transitive_count_where(sig, false)
    }

    /// As [`Self::transitive_hom_count`], with every elliptic image required to
    /// be a product of full `m_i`-cycles when `pinned`.
    pub fn transitive_count_where(&self, sig: &FuchsianSignature, pinned: bool) -> u128 {
        let d = sig.periods().len();
        let free = (sig.cusps() + sig.boundary()) as usize;
        let handles = if sig.oriented() { 2 } else { 1 } * sig.genus() as usize;
        let k = d + free + handles;
        let mut domains: Vec<Vec<usize>> = Vec::with_capacity(k);
        for &m in sig.periods() {
            let ok = self.order_dividing(m);
            domains.push(
                (0..self.order())
                    .filter(|&a| ok[a] == 1 && (!pinned || self.cycle_type(a).iter().all(|&c| c as u64 == m)))
                    .collect(),
            );
        }
        for _ in 0..free + handles {
            domains.push((0..self.order()).collect());
        }
        let mut count = 0u128;
        let mut tuple = vec![0usize; k];
        self.walk(sig, &domains, 0, &mut tuple, &mut count);
        count
    }

    fn relator(&self, sig: &FuchsianSignature, tuple: &[usize]) -> usize {
        let plain = sig.periods().len() + (sig.cusps() + sig.boundary()) as usize;
        let mut r = self.identity;
        for &x in &tuple[..plain] {
            r = self.mul(r, x);
        }
        if sig.oriented() {
            for pair in tuple[plain..].chunks(2) {
                let (a, b) = (pair[0], pair[1]);
                r = self.mul(r, self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))));
            }
        } else {
            for &a in &tuple[plain..] {
                r = self.mul(r, self.mul(a, a));
            }
        }
        r
    }

    fn walk(&self, sig: &FuchsianSignature, domains: &[Vec<usize>], depth: usize, tuple: &mut Vec<usize>, count: &mut u128) {
        if depth == domains.len() {
            if self.relator(sig, tuple) == self.identity && self.is_transitive(tuple) {
                *count += 1;
            }
            return;
        }
        for &a in &domains[depth] {
            tuple[depth] = a;
            self.walk(sig, domains, depth + 1, tuple, count);
        }
    }
}

pub fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Index-`n` subgroup counts of the rank-two free group from
/// `a_n = n * n! - sum_{k<n} (n-k)! a_k`.
pub fn free_rank_two_subgroups(n_max: usize) -> Vec<u128> {
    let mut a = vec![0u128; n_max + 1];
    for n in 1..=n_max {
        let mut value = n as u128 * factorial_u128(n);
        for (k, a_k) in a.iter().enumerate().take(n).skip(1) {
            value -= factorial_u128(n - k) * a_k;
        }
        a[n] = value;
    }
    a
}

/// Standard Young tableaux of `shape`, each as the cell `(row, col)` holding
/// entry `i` at position `i`.
pub fn standard_tableaux(shape: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    let mut filled = vec![0usize; shape.len()];
    let mut cells = Vec::with_capacity(n);
    fill_tableaux(shape, &mut filled, &mut cells, n, &mut out);
    out
}

fn fill_tableaux(
    shape: &[usize],
    filled: &mut [usize],
    cells: &mut Vec<(usize, usize)>,
    n: usize,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if cells.len() == n {
        out.push(cells.clone());
        return;
    }
    for row in 0..shape.len() {
        let col = filled[row];
        if col < shape[row] && (row == 0 || filled[row - 1] > col) {
            filled[row] += 1;
            cells.push((row, col));
            fill_tableaux(shape, filled, cells, n, out);
            cells.pop();
            filled[row] -= 1;
        }
    }
}

type Matrix = Vec<Vec<f64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// Young's orthogonal form of `s_i = (i, i+1)`, entries `0..n` zero-based.
fn orthogonal_generator(tableaux: &[Vec<(usize, usize)>], index: &HashMap<Vec<(usize, usize)>, usize>, i: usize) -> Matrix {
    let dim = tableaux.len();
    let mut m = vec![vec![0.0; dim]; dim];
    for (t, cells) in tableaux.iter().enumerate() {
        let (r1, c1) = cells[i];
        let (r2, c2) = cells[i + 1];
        if r1 == r2 {
            m[t][t] = 1.0;
        } else if c1 == c2 {
            m[t][t] = -1.0;
        } else {
            let axial = (c2 as f64 - r2 as f64) - (c1 as f64 - r1 as f64);
            m[t][t] = 1.0 / axial;
            let mut swapped = cells.clone();
            swapped.swap(i, i + 1);
            let s = index[&swapped];
            m[s][t] = (1.0 - 1.0 / (axial * axial)).sqrt();
        }
    }
    m
}

/// `chi_shape` at the class with the given cycle lengths, as the trace of an
/// explicit orthogonal representation matrix.
pub fn young_character(shape: &[usize], cycles: &[usize]) -> i64 {
    let tableaux = standard_tableaux(shape);
    let index: HashMap<Vec<(usize, usize)>, usize> = tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let dim = tableaux.len();
    let n: usize = shape.iter().sum();
    let generators: Vec<Matrix> = (0..n.saturating_sub(1)).map(|i| orthogonal_generator(&tableaux, &index, i)).collect();
    let mut rep: Matrix = (0..dim).map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mut start = 0;
    for &len in cycles {
        for generator in &generators[start..start + len - 1] {
            rep = mat_mul(&rep, generator);
        }
        start += len;
    }
    let trace: f64 = (0..dim).map(|i| rep[i][i]).sum();
    let rounded = trace.round();
    assert!((trace - rounded).abs() < 1e-6, "non-integral trace {trace}");
    rounded as i64
}

/// Rim hooks of size `r` found by testing every `r`-subset of cells:
/// connected, no 2x2 block, and the complement is again a Young diagram.
/// Returns `(remainder, rows spanned - 1)` pairs.
pub fn border_strips(shape: &[usize], r: usize) -> BTreeSet<(Vec<usize>, usize)> {
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j))).collect();
    let mut out = BTreeSet::new();
    let mut chosen = Vec::with_capacity(r);
    subsets(&cells, r, 0, &mut chosen, &mut |strip| {
        if let Some(found) = check_strip(shape, strip) {
            out.insert(found);
        }
    });
    out
}

fn subsets(cells: &[(usize, usize)], r: usize, from: usize, chosen: &mut Vec<(usize, usize)>, f: &mut impl FnMut(&[(usize, usize)])) {
    if chosen.len() == r {
        f(chosen);
        return;
    }
    for i in from..cells.len() {
        if cells.len() - i < r - chosen.len() {
            break;
        }
        chosen.push(cells[i]);
        subsets(cells, r, i + 1, chosen, f);
        chosen.pop();
    }
}

fn check_strip(shape: &[usize], strip: &[(usize, usize)]) -> Option<(Vec<usize>, usize)> {
    let set: BTreeSet<(usize, usize)> = strip.iter().copied().collect();
    let mut rest: Vec<usize> = shape.to_vec();
    for (row, len) in rest.iter_mut().enumerate() {
        let removed = strip.iter().filter(|c| c.0 == row).count();
        if removed > 0 && !(*len - removed..*len).all(|j| set.contains(&(row, j))) {
            return None;
        }
        *len -= removed;
    }
    if rest.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    if strip.iter().any(|&(i, j)| set.contains(&(i + 1, j)) && set.contains(&(i, j + 1)) && set.contains(&(i + 1, j + 1))) {
        return None;
    }
    let mut seen = BTreeSet::from([strip[0]]);
    let mut queue = vec![strip[0]];
    while let Some((i, j)) = queue.pop() {
        let mut near = vec![(i + 1, j), (i, j + 1)];
        if i > 0 {
            near.push((i - 1, j));
        }
        if j > 0 {
            near.push((i, j - 1));
        }
        for c in near {
            if set.contains(&c) && seen.insert(c) {
                queue.push(c);
            }
        }
    }
    if seen.len() != strip.len() {
        return None;
    }
    let rows: BTreeSet<usize> = strip.iter().map(|c| c.0).collect();
    rest.retain(|&p| p > 0);
    Some((rest, rows.len() - 1))
}
