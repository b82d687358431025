//! Reference implementations used to cross-check the exact solvers.
//!
//! Each oracle takes a different algorithmic route than the solver it
//! checks: exhaustive vertex enumeration for the simplex, integer-box and
//! integer-slice enumeration for branch-and-bound, full tour and permutation
//! enumeration for Held-Karp and the Hungarian method, and s-t cut
//! enumeration for augmenting-path max flow.

use orforge_core::instance::{
    Direction, LpInstance, MaxFlowInstance, MinCostFlowInstance, Sense, TspInstance,
};

const FEAS_TOL: f64 = 1e-6;

fn better(dir: Direction, candidate: f64, best: f64) -> bool {
    match dir {
        Direction::Maximize => candidate > best,
        Direction::Minimize => candidate < best,
    }
}

fn row_feasible(lp: &LpInstance, x: &[f64]) -> bool {
    for (i, row) in lp.a.iter().enumerate() {
        let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
        let ok = match lp.senses[i] {
            Sense::Le => lhs <= lp.b[i] + FEAS_TOL,
            Sense::Ge => lhs >= lp.b[i] - FEAS_TOL,
            Sense::Eq => (lhs - lp.b[i]).abs() <= FEAS_TOL,
        };
        if !ok {
            return false;
        }
    }
    (0..lp.num_vars()).all(|j| x[j] >= lp.lower(j) - FEAS_TOL && x[j] <= lp.upper(j) + FEAS_TOL)
}

fn objective(lp: &LpInstance, x: &[f64]) -> f64 {
    lp.c.iter().zip(x).map(|(c, v)| c * v).sum()
}

/// Solves the n x n system `rows * x = rhs` by Gaussian elimination with
/// partial pivoting; `None` when (near-)singular.
fn solve_square(mut rows: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| {
            rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap()
        })?;
        if rows[pivot][col].abs() < 1e-9 {
            return None;
        }
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let f = rows[r][col] / rows[col][col];
            for c in col..n {
                rows[r][c] -= f * rows[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for c in col + 1..n {
            acc -= rows[col][c] * x[c];
        }
        x[col] = acc / rows[col][col];
    }
    Some(x)
}

/// Exhaustive vertex enumeration for an LP whose variables all have finite
/// bounds (so the feasible region, if nonempty, is a polytope). Returns the
/// optimal objective, or `None` when no feasible vertex exists.
pub fn lp_vertex_optimum(lp: &LpInstance) -> Option<f64> {
    let n = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, &rhs) in lp.a.iter().zip(&lp.b) {
        planes.push((row.clone(), rhs));
    }
    for j in 0..n {
        let mut unit = vec![0.0; n];
        unit[j] = 1.0;
        planes.push((unit.clone(), lp.lower(j)));
        assert!(
            lp.upper(j).is_finite(),
            "vertex enumeration needs finite upper bounds"
        );
        planes.push((unit, lp.upper(j)));
    }

    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; n];
    enumerate_subsets(planes.len(), n, &mut pick, 0, 0, &mut |chosen| {
        let rows: Vec<Vec<f64>> = chosen.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<f64> = chosen.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(rows, rhs) {
            if row_feasible(lp, &x) {
                let z = objective(lp, &x);
                if best.is_none() || better(lp.objective, z, best.unwrap()) {
                    best = Some(z);
                }
            }
        }
    });
    best
}

fn enumerate_subsets(
    total: usize,
    want: usize,
    pick: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if depth == want {
        visit(pick);
        return;
    }
    for i in start..total {
        pick[depth] = i;
        enumerate_subsets(total, want, pick, depth + 1, i + 1, visit);
    }
}

/// Exhaustive enumeration of every integer point in the (finite) bound box
/// of an all-integer instance.
pub fn ip_box_optimum(lp: &LpInstance) -> Option<f64> {
    let n = lp.num_vars();
    assert!(lp.integrality.iter().all(|&f| f) && lp.integrality.len() == n);
    let lows: Vec<i64> = (0..n).map(|j| lp.lower(j).ceil() as i64).collect();
    let highs: Vec<i64> = (0..n)
        .map(|j| {
            assert!(lp.upper(j).is_finite(), "box enumeration needs finite bounds");
            lp.upper(j).floor() as i64
        })
        .collect();
    let mut best: Option<f64> = None;
    let mut point = lows.clone();
    loop {
        let x: Vec<f64> = point.iter().map(|&v| v as f64).collect();
        if row_feasible(lp, &x) {
            let z = objective(lp, &x);
            if best.is_none() || better(lp.objective, z, best.unwrap()) {
                best = Some(z);
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                return best;
            }
            if point[j] < highs[j] {
                point[j] += 1;
                break;
            }
            point[j] = lows[j];
            j += 1;
        }
    }
}

/// Mixed-integer reference: enumerate every integer assignment over the
/// integer variables, substitute it into the rows, and optimize the
/// continuous remainder by vertex enumeration. Independent of the simplex
/// implementation under test.
pub fn milp_slice_optimum(lp: &LpInstance) -> Option<f64> {
    let n = lp.num_vars();
    let int_vars: Vec<usize> = (0..n).filter(|&j| lp.is_integer(j)).collect();
    let cont_vars: Vec<usize> = (0..n).filter(|&j| !lp.is_integer(j)).collect();
    assert!(!cont_vars.is_empty(), "use ip_box_optimum for pure-integer instances");

    let lows: Vec<i64> = int_vars.iter().map(|&j| lp.lower(j).ceil() as i64).collect();
    let highs: Vec<i64> = int_vars
        .iter()
        .map(|&j| {
            assert!(lp.upper(j).is_finite(), "slice enumeration needs finite bounds");
            lp.upper(j).floor() as i64
        })
        .collect();

    let mut best: Option<f64> = None;
    if lows.iter().zip(&highs).any(|(l, h)| l > h) {
        return None;
    }
    let mut point = lows.clone();
    loop {
        // Reduced LP over the continuous variables for this integer slice.
        let fixed_obj: f64 = int_vars
            .iter()
            .zip(&point)
            .map(|(&j, &v)| lp.c[j] * v as f64)
            .sum();
        let slice = LpInstance {
            objective: lp.objective,
            c: cont_vars.iter().map(|&j| lp.c[j]).collect(),
            a: lp
                .a
                .iter()
                .map(|row| cont_vars.iter().map(|&j| row[j]).collect())
                .collect(),
            senses: lp.senses.clone(),
            b: lp
                .b
                .iter()
                .zip(&lp.a)
                .map(|(&rhs, row)| {
                    rhs - int_vars
                        .iter()
                        .zip(&point)
                        .map(|(&j, &v)| row[j] * v as f64)
                        .sum::<f64>()
                })
                .collect(),
            lower_bounds: cont_vars.iter().map(|&j| lp.lower(j)).collect(),
            upper_bounds: cont_vars.iter().map(|&j| lp.upper(j)).collect(),
            integrality: vec![],
        };
        if let Some(z) = lp_vertex_optimum(&slice) {
            let total = z + fixed_obj;
            if best.is_none() || better(lp.objective, total, best.unwrap()) {
                best = Some(total);
            }
        }
        let mut j = 0;
        loop {
            if j == int_vars.len() {
                return best;
            }
            if point[j] < highs[j] {
                point[j] += 1;
                break;
            }
            point[j] = lows[j];
            j += 1;
        }
    }
}

/// Full enumeration of all (n-1)! tours fixing city 0 first.
pub fn tsp_brute_optimum(tsp: &TspInstance) -> f64 {
    fn recurse(tsp: &TspInstance, rest: &mut Vec<usize>, tour: &mut Vec<usize>, best: &mut f64) {
        if rest.is_empty() {
            let mut len = 0.0;
            for w in 0..tour.len() {
                len += tsp.dist[tour[w]][tour[(w + 1) % tour.len()]];
            }
            if len < *best {
                *best = len;
            }
            return;
        }
        for i in 0..rest.len() {
            let city = rest.remove(i);
            tour.push(city);
            recurse(tsp, rest, tour, best);
            tour.pop();
            rest.insert(i, city);
        }
    }
    let mut rest: Vec<usize> = (1..tsp.n).collect();
    let mut tour = vec![0];
    let mut best = f64::INFINITY;
    recurse(tsp, &mut rest, &mut tour, &mut best);
    best
}

/// Minimum s-t cut capacity by enumerating every source side containing
/// `source` and excluding `sink`. Equals the max flow value.
pub fn min_cut_capacity(mf: &MaxFlowInstance) -> f64 {
    let others: Vec<usize> = (0..mf.node_count)
        .filter(|&v| v != mf.source && v != mf.sink)
        .collect();
    let mut best = f64::INFINITY;
    for bits in 0..(1u32 << others.len()) {
        let mut in_s = vec![false; mf.node_count];
        in_s[mf.source] = true;
        for (i, &v) in others.iter().enumerate() {
            in_s[v] = bits & (1 << i) != 0;
        }
        let cut: f64 = mf
            .arcs
            .iter()
            .filter(|arc| in_s[arc.from] && !in_s[arc.to])
            .map(|arc| arc.capacity)
            .sum();
        if cut < best {
            best = cut;
        }
    }
    best
}

/// Best assignment objective over all n! permutations.
pub fn assignment_brute_optimum(cost: &[Vec<f64>], objective: Direction) -> f64 {
    fn recurse(
        cost: &[Vec<f64>],
        objective: Direction,
        row: usize,
        used: &mut Vec<bool>,
        acc: f64,
        best: &mut Option<f64>,
    ) {
        if row == cost.len() {
            if best.is_none() || better(objective, acc, best.unwrap()) {
                *best = Some(acc);
            }
            return;
        }
        for col in 0..cost.len() {
            if !used[col] {
                used[col] = true;
                recurse(cost, objective, row + 1, used, acc + cost[row][col], best);
                used[col] = false;
            }
        }
    }
    let mut used = vec![false; cost.len()];
    let mut best = None;
    recurse(cost, objective, 0, &mut used, 0.0, &mut best);
    best.expect("n >= 1")
}

/// Rewrites a min-cost-flow network as a bounded LP: one variable per arc
/// (`0 <= x <= capacity`) and one flow-conservation equality per node, so
/// the simplex gives an independent route to the same optimum.
pub fn mcf_as_lp(mcf: &MinCostFlowInstance) -> LpInstance {
    let m = mcf.arcs.len();
    let mut a = vec![vec![0.0; m]; mcf.node_count];
    for (j, arc) in mcf.arcs.iter().enumerate() {
        a[arc.from][j] += 1.0;
        a[arc.to][j] -= 1.0;
    }
    LpInstance {
        objective: Direction::Minimize,
        c: mcf.arcs.iter().map(|arc| arc.unit_cost).collect(),
        a,
        senses: vec![Sense::Eq; mcf.node_count],
        b: mcf.supplies.clone(),
        lower_bounds: vec![0.0; m],
        upper_bounds: mcf.arcs.iter().map(|arc| arc.capacity).collect(),
        integrality: vec![],
    }
}

// Fixed examples worked out by hand; these pin the oracles themselves before
// any solver is trusted against them.
mod self_checks {
    use super::*;

    fn example_lp() -> LpInstance {
        LpInstance {
            objective: Direction::Maximize,
            c: vec![3.0, 2.0],
            a: vec![vec![1.0, 1.0], vec![1.0, 3.0]],
            senses: vec![Sense::Le, Sense::Le],
            b: vec![4.0, 6.0],
            lower_bounds: vec![0.0, 0.0],
            upper_bounds: vec![100.0, 100.0],
            integrality: vec![],
        }
    }

    #[test]
    fn vertex_enumeration_matches_hand_optimum() {
        // Vertices of {x+y<=4, x+3y<=6, 0<=x,y<=100}: best is (4,0) -> 12.
        let z = lp_vertex_optimum(&example_lp()).unwrap();
        assert!((z - 12.0).abs() < 1e-9, "{z}");
    }

    #[test]
    fn vertex_enumeration_detects_infeasibility() {
        let mut lp = example_lp();
        lp.a.push(vec![1.0, 1.0]);
        lp.senses.push(Sense::Ge);
        lp.b.push(300.0);
        assert_eq!(lp_vertex_optimum(&lp), None);
    }

    #[test]
    fn box_enumeration_matches_hand_optimum() {
        // max 5x+4y s.t. 6x+4y<=10, x,y integer in [0,10]: (1,1) -> 9.
        let lp = LpInstance {
            objective: Direction::Maximize,
            c: vec![5.0, 4.0],
            a: vec![vec![6.0, 4.0]],
            senses: vec![Sense::Le],
            b: vec![10.0],
            lower_bounds: vec![0.0, 0.0],
            upper_bounds: vec![10.0, 10.0],
            integrality: vec![true, true],
        };
        let z = ip_box_optimum(&lp).unwrap();
        assert!((z - 9.0).abs() < 1e-9, "{z}");
    }

    #[test]
    fn slice_enumeration_matches_hand_optimum() {
        // max 5x+4y with 6x+4y<=10, x integer, y continuous: x=0 gives
        // y=2.5 -> 10; x=1 gives y=1 -> 9. Optimum 10.
        let lp = LpInstance {
            objective: Direction::Maximize,
            c: vec![5.0, 4.0],
            a: vec![vec![6.0, 4.0]],
            senses: vec![Sense::Le],
            b: vec![10.0],
            lower_bounds: vec![0.0, 0.0],
            upper_bounds: vec![10.0, 10.0],
            integrality: vec![true, false],
        };
        let z = milp_slice_optimum(&lp).unwrap();
        assert!((z - 10.0).abs() < 1e-9, "{z}");
    }

    #[test]
    fn tour_enumeration_matches_hand_optimum() {
        // Five cities on a line at 0,1,2,3,4: best cycle walks out and back.
        let pos = [0.0f64, 1.0, 2.0, 3.0, 4.0];
        let dist: Vec<Vec<f64>> = pos
            .iter()
            .map(|a| pos.iter().map(|b| (a - b).abs()).collect())
            .collect();
        let tsp = TspInstance {
            n: 5,
            dist,
            symmetric: true,
        };
        let z = tsp_brute_optimum(&tsp);
        assert!((z - 8.0).abs() < 1e-9, "{z}");
    }

    #[test]
    fn cut_enumeration_matches_hand_optimum() {
        // s->a cap 3, s->b cap 2, a->t cap 2, b->t cap 3: min cut 4.
        use orforge_core::instance::FlowArc;
        let mf = MaxFlowInstance {
            node_count: 4,
            arcs: vec![
                FlowArc { from: 0, to: 1, capacity: 3.0 },
                FlowArc { from: 0, to: 2, capacity: 2.0 },
                FlowArc { from: 1, to: 3, capacity: 2.0 },
                FlowArc { from: 2, to: 3, capacity: 3.0 },
            ],
            source: 0,
            sink: 3,
        };
        let z = min_cut_capacity(&mf);
        assert!((z - 4.0).abs() < 1e-9, "{z}");
    }

    #[test]
    fn permutation_enumeration_matches_hand_optimum() {
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let z = assignment_brute_optimum(&cost, Direction::Minimize);
        assert!((z - 5.0).abs() < 1e-9, "{z}");
    }

    #[test]
    fn the_flow_lp_formulation_matches_hand_optimum() {
        // Ship 3 units from node 0 to node 2: the cheap path 0->1->2 costs
        // 3/unit and fits all 3 units, so the optimum is 9. With both
        // outgoing capacities cut to 1, only 2 units can leave the source.
        use orforge_core::instance::McfArc;
        let mut mcf = MinCostFlowInstance {
            node_count: 3,
            arcs: vec![
                McfArc { from: 0, to: 1, capacity: 4.0, unit_cost: 2.0 },
                McfArc { from: 0, to: 2, capacity: 2.0, unit_cost: 5.0 },
                McfArc { from: 1, to: 2, capacity: 3.0, unit_cost: 1.0 },
            ],
            supplies: vec![3.0, 0.0, -3.0],
        };
        let z = lp_vertex_optimum(&mcf_as_lp(&mcf)).unwrap();
        assert!((z - 9.0).abs() < 1e-9, "{z}");

        mcf.arcs[0].capacity = 1.0;
        mcf.arcs[1].capacity = 1.0;
        assert_eq!(lp_vertex_optimum(&mcf_as_lp(&mcf)), None);
    }
}
