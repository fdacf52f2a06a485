//! Symbolic perturbation (simulation of simplicity) for the orientation and
//! insphere determinants.
//!
//! Vertex `i` is conceptually displaced by `(e(i,1), e(i,2), e(i,3))` with
//! `e(i,j) = eps^(2^(4(i+1)-j))`, so lower-indexed vertices receive larger
//! perturbations and every predicate answers questions about one fixed
//! perturbed copy of the whole point set. The perturbed determinant is a
//! polynomial in `eps`; its sign as `eps -> 0+` is the sign of the first
//! nonzero coefficient in dominance order.
//!
//! Rather than transcribing the published minor tables, the expansion is
//! derived mechanically: every monomial of the determinant is enumerated
//! once, keyed by its total eps-exponent (a 21-bit set; the per-vertex
//! exponent blocks are disjoint, so no carries occur), and coefficients that
//! share a key are summed. Keys only depend on the *ranks* of the vertex
//! indices among the call's arguments, so the grouped table is a static
//! object and per-call work is sorting five rows plus exact evaluation of
//! coefficient groups until one is nonzero. The highest-key group is a bare
//! `+/-1`, so the cascade is total.

use std::sync::OnceLock;

use super::exact::Dyadic;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Factor {
    /// Multiplicative identity (ones column or a pure-eps choice).
    Unit,
    Coord(u8),
    /// 2x, 2y, 2z from expanding the lifted |p + e|^2 entry.
    TwoCoord(u8),
    /// x^2 + y^2 + z^2.
    Lift,
}

#[derive(Clone, Debug)]
struct Term {
    sign: i8,
    /// One factor per row, indexed by row rank.
    factors: Vec<Factor>,
}

#[derive(Clone, Debug)]
struct Group {
    key: u32,
    terms: Vec<Term>,
}

/// Bit position of the eps attached to coordinate `j` (0 = x, 1 = y, 2 = z)
/// of the row with rank `r`.
fn eps_bit(r: usize, j: usize) -> u32 {
    (4 * r + 3 - j) as u32
}

/// Choices for the entry at `(row, col)`: `(key-bit mask, numeric factor)`.
fn entry_choices(row: usize, col: usize) -> Vec<(u32, Factor)> {
    match col {
        0 => vec![(0, Factor::Unit)],
        1 | 2 | 3 => {
            let j = col - 1;
            vec![
                (0, Factor::Coord(j as u8)),
                (1 << eps_bit(row, j), Factor::Unit),
            ]
        }
        4 => {
            // |p + e|^2 = lift + 2x e1 + 2y e2 + 2z e3 + e1^2 + e2^2 + e3^2.
            let mut v = vec![(0, Factor::Lift)];
            for j in 0..3 {
                v.push((1 << eps_bit(row, j), Factor::TwoCoord(j as u8)));
            }
            for j in 0..3 {
                // e_j^2 doubles the exponent: next bit up. Collides with the
                // linear eps of the neighboring coordinate by construction.
                v.push((1 << (eps_bit(row, j) + 1), Factor::Unit));
            }
            v
        }
        _ => unreachable!(),
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i8)>) {
        if k == 1 {
            let mut inv = 0;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            out.push((perm.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut perm, &mut out);
    out
}

/// Expands the determinant of the n x n matrix whose row `r` is
/// `[1, x_r + e(r,x), y_r + e(r,y), z_r + e(r,z)]` (n = 4) or the same plus
/// the lifted column `|p_r + e_r|^2` (n = 5), grouped by eps-exponent key.
fn build_table(n: usize) -> Vec<Group> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
    for (perm, psign) in permutations(n) {
        // perm[row] = column index.
        let mut stack: Vec<(usize, u32, Vec<Factor>)> = vec![(0, 0, Vec::new())];
        while let Some((row, key, factors)) = stack.pop() {
            if row == n {
                groups.entry(key).or_default().push(Term {
                    sign: psign,
                    factors,
                });
                continue;
            }
            for (bit, f) in entry_choices(row, perm[row]) {
                let mut fs = factors.clone();
                fs.push(f);
                stack.push((row + 1, key | bit, fs));
            }
        }
    }
    groups
        .into_iter()
        .map(|(key, terms)| Group { key, terms })
        .collect()
}

fn orient_table() -> &'static [Group] {
    static TABLE: OnceLock<Vec<Group>> = OnceLock::new();
    TABLE.get_or_init(|| build_table(4))
}

fn insphere_table() -> &'static [Group] {
    static TABLE: OnceLock<Vec<Group>> = OnceLock::new();
    TABLE.get_or_init(|| build_table(5))
}

struct Row {
    coord: [Dyadic; 3],
    lift: Dyadic,
}

impl Row {
    fn new(p: [f64; 3], with_lift: bool) -> Self {
        let coord: [Dyadic; 3] = core::array::from_fn(|j| Dyadic::from_f64(p[j]));
        let lift = if with_lift {
            coord[0]
                .square()
                .add(&coord[1].square())
                .add(&coord[2].square())
        } else {
            Dyadic::zero()
        };
        Row { coord, lift }
    }

    fn factor(&self, f: Factor) -> Option<Dyadic> {
        match f {
            Factor::Unit => None,
            Factor::Coord(j) => Some(self.coord[j as usize].clone()),
            Factor::TwoCoord(j) => Some(self.coord[j as usize].twice()),
            Factor::Lift => Some(self.lift.clone()),
        }
    }
}

/// Sorts rows by vertex index, returning the permutation parity (+1/-1).
fn sort_rows<const N: usize>(pts: &mut [[f64; 3]; N], ids: &mut [u32; N]) -> i8 {
    let mut parity = 1i8;
    for i in 1..N {
        let mut j = i;
        while j > 0 && ids[j - 1] > ids[j] {
            ids.swap(j - 1, j);
            pts.swap(j - 1, j);
            parity = -parity;
            j -= 1;
        }
    }
    parity
}

fn eval_cascade(table: &[Group], rows: &[Row]) -> i8 {
    debug_assert!(table.windows(2).all(|w| w[0].key < w[1].key));
    for group in table {
        let mut acc = Dyadic::zero();
        for term in &group.terms {
            let mut prod: Option<Dyadic> = None;
            let mut zero = false;
            for (r, &f) in term.factors.iter().enumerate() {
                if let Some(v) = rows[r].factor(f) {
                    if v.is_zero() {
                        zero = true;
                        break;
                    }
                    prod = Some(match prod {
                        None => v,
                        Some(p) => p.mul(&v),
                    });
                }
            }
            if zero {
                continue;
            }
            let v = prod.unwrap_or_else(|| Dyadic::from_f64(1.0));
            acc = if term.sign > 0 { acc.add(&v) } else { acc.sub(&v) };
        }
        let s = acc.signum();
        if s != 0 {
            return s;
        }
    }
    unreachable!("the symbolic perturbation cascade ends in a constant term");
}

/// Sign of the perturbed orientation determinant `det [1 | p_i + e_i]`,
/// rows in argument order. Never zero.
pub(crate) fn orient3d_perturbed_sign(mut pts: [[f64; 3]; 4], mut ids: [u32; 4]) -> i8 {
    let parity = sort_rows(&mut pts, &mut ids);
    let rows: Vec<Row> = pts.iter().map(|&p| Row::new(p, false)).collect();
    parity * eval_cascade(orient_table(), &rows)
}

/// Sign of the perturbed 5x5 insphere determinant `det [1 | p_i + e_i | lift]`,
/// rows in argument order. Never zero. Follows the same raw-sign convention
/// as `exact::insphere_det_sign` (negative = fifth point inside for a
/// positively oriented first four).
pub(crate) fn insphere_perturbed_sign(mut pts: [[f64; 3]; 5], mut ids: [u32; 5]) -> i8 {
    let parity = sort_rows(&mut pts, &mut ids);
    let rows: Vec<Row> = pts.iter().map(|&p| Row::new(p, true)).collect();
    parity * eval_cascade(insphere_table(), &rows)
}
