//! Problem instances: benchmark (pmed) and native file formats, distance
//! completion, the gradual-coverage probability matrix, and safe preprocessing.

use crate::error::{Error, Result};

/// Coverage probabilities within this distance of 1.0 are snapped to exactly 1
/// so that the full-coverage location set stays well-defined under float noise.
const FULL_COVERAGE_SNAP: f64 = 1e-12;

/// An undirected weighted graph as read from an OR-library style file.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub n_vertices: usize,
    /// Edges as (u, v, cost) with 1-based vertex ids and cost >= 0.
    pub edges: Vec<(usize, usize, f64)>,
    /// The `p` value from the file header. Informational: the number of
    /// facilities to open comes from the caller, not the file.
    pub p_hint: usize,
}

/// Parses the pmed layout: a header line `n m p` followed by `m` lines `u v cost`.
pub fn parse_pmed(text: &str) -> Result<RawGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let fields = split_numbers(header);
    if fields.len() != 3 {
        return Err(Error::parse(line_no, "header must be `n m p`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(line_no, "bad vertex count"))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(line_no, "bad edge count"))?;
    let p_hint: usize = fields[2]
        .parse()
        .map_err(|_| Error::parse(line_no, "bad p value"))?;

    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        if edges.len() == m {
            return Err(Error::parse(line_no, "unexpected line after last edge"));
        }
        let fields = split_numbers(line);
        if fields.len() != 3 {
            return Err(Error::parse(line_no, "edge line must be `u v cost`"));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(line_no, "bad vertex id"))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(line_no, "bad vertex id"))?;
        let cost: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(line_no, "bad edge cost"))?;
        if u == 0 || u > n || v == 0 || v > n {
            return Err(Error::parse(line_no, "vertex id out of range"));
        }
        if !cost.is_finite() || cost < 0.0 {
            return Err(Error::parse(line_no, "negative or non-finite edge cost"));
        }
        edges.push((u, v, cost));
    }
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("header promised {} edges, found {}", m, edges.len()),
        ));
    }
    Ok(RawGraph {
        n_vertices: n,
        edges,
        p_hint,
    })
}

fn split_numbers(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

/// All-pairs shortest paths by Floyd-Warshall. Unreachable pairs stay at
/// infinity, which maps to zero coverage downstream.
pub fn all_pairs_shortest_paths(g: &RawGraph) -> Vec<Vec<f64>> {
    let n = g.n_vertices;
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(u, v, cost) in &g.edges {
        let (u, v) = (u - 1, v - 1);
        if cost < d[u][v] {
            d[u][v] = cost;
            d[v][u] = cost;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Linear-decay coverage: full within distance `r`, zero beyond `big_r`,
/// linear in between. Values are clamped to [0, 1].
pub fn build_coverage(d: &[Vec<f64>], r: f64, big_r: f64) -> Result<Vec<Vec<f64>>> {
    if big_r <= r || r < 0.0 {
        return Err(Error::Config(format!(
            "coverage radii must satisfy 0 <= r < R, got r={r}, R={big_r}"
        )));
    }
    let p = d
        .iter()
        .map(|row| {
            row.iter()
                .map(|&dist| {
                    if dist <= r {
                        1.0
                    } else if dist >= big_r {
                        0.0
                    } else {
                        (1.0 - (dist - r) / (big_r - r)).clamp(0.0, 1.0)
                    }
                })
                .collect()
        })
        .collect();
    Ok(p)
}

/// A validated MPCLP instance.
///
/// `p(i, j)` is the probability that a facility at location `i` covers
/// customer `j`. For each customer the locations are partitioned into the
/// partial-coverage set (p < 1) and the full-coverage set (p = 1).
#[derive(Debug, Clone)]
pub struct Instance {
    n_locations: usize,
    n_customers: usize,
    demand: Vec<f64>,
    /// Customer-major coverage rows: rows[j][i] = p_ij.
    rows: Vec<Vec<f64>>,
    k: u32,
    theta: f64,
    partial: Vec<Vec<usize>>,
    full: Vec<Vec<usize>>,
    /// Per customer: location indices sorted by ascending p_ij, cached for
    /// the linear-time separation of the max-coverage inequalities.
    sorted_by_p: Vec<Vec<usize>>,
}

impl Instance {
    /// Builds and validates an instance from a location-major coverage matrix
    /// (`coverage[i][j] = p_ij`).
    pub fn new(coverage: Vec<Vec<f64>>, demand: Vec<f64>, k: u32, theta: f64) -> Result<Instance> {
        let n_locations = coverage.len();
        if n_locations == 0 {
            return Err(Error::Validation("instance has no locations".into()));
        }
        let n_customers = coverage[0].len();
        if n_customers == 0 {
            return Err(Error::Validation("instance has no customers".into()));
        }
        if demand.len() != n_customers {
            return Err(Error::Validation(format!(
                "expected {} demands, got {}",
                n_customers,
                demand.len()
            )));
        }
        for (j, &d) in demand.iter().enumerate() {
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::Validation(format!(
                    "demand of customer {} must be positive, got {}",
                    j, d
                )));
            }
        }
        if k < 2 {
            return Err(Error::Validation(format!("K must be at least 2, got {k}")));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Validation(format!(
                "theta must lie in [0, 1], got {theta}"
            )));
        }

        let mut rows = vec![vec![0.0; n_locations]; n_customers];
        for (i, loc_row) in coverage.iter().enumerate() {
            if loc_row.len() != n_customers {
                return Err(Error::Validation(format!(
                    "coverage row {} has {} entries, expected {}",
                    i,
                    loc_row.len(),
                    n_customers
                )));
            }
            for (j, &p) in loc_row.iter().enumerate() {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::Validation(format!(
                        "coverage p[{i}][{j}] must lie in [0, 1], got {p}"
                    )));
                }
                rows[j][i] = if 1.0 - p <= FULL_COVERAGE_SNAP {
                    1.0
                } else {
                    p
                };
            }
        }

        let mut partial = Vec::with_capacity(n_customers);
        let mut full = Vec::with_capacity(n_customers);
        let mut sorted_by_p = Vec::with_capacity(n_customers);
        for row in &rows {
            let mut i_p = Vec::new();
            let mut i_f = Vec::new();
            for (i, &p) in row.iter().enumerate() {
                if p == 1.0 {
                    i_f.push(i);
                } else {
                    i_p.push(i);
                }
            }
            let mut order: Vec<usize> = (0..n_locations).collect();
            order.sort_by(|&a, &b| row[a].partial_cmp(&row[b]).unwrap().then(a.cmp(&b)));
            partial.push(i_p);
            full.push(i_f);
            sorted_by_p.push(order);
        }

        Ok(Instance {
            n_locations,
            n_customers,
            demand,
            rows,
            k,
            theta,
            partial,
            full,
            sorted_by_p,
        })
    }

    /// Builds an instance from a graph the way the benchmark suite does:
    /// customers and candidate locations coincide with the vertices, demands
    /// are uniform, and coverage decays linearly with shortest-path distance.
    pub fn from_graph(g: &RawGraph, r: f64, big_r: f64, k: u32, theta: f64) -> Result<Instance> {
        let d = all_pairs_shortest_paths(g);
        let coverage = build_coverage(&d, r, big_r)?;
        let demand = vec![1.0; g.n_vertices];
        Instance::new(coverage, demand, k, theta)
    }

    pub fn n_locations(&self) -> usize {
        self.n_locations
    }

    pub fn n_customers(&self) -> usize {
        self.n_customers
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn demand(&self, j: usize) -> f64 {
        self.demand[j]
    }

    pub fn demands(&self) -> &[f64] {
        &self.demand
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.rows[j][i]
    }

    /// Coverage row of customer `j` over all locations.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.rows[j]
    }

    /// Locations that cover customer `j` only partially (p < 1).
    pub fn partial_set(&self, j: usize) -> &[usize] {
        &self.partial[j]
    }

    /// Locations that cover customer `j` fully (p = 1).
    pub fn full_set(&self, j: usize) -> &[usize] {
        &self.full[j]
    }

    /// Locations sorted by ascending coverage of customer `j`.
    pub fn ascending_by_p(&self, j: usize) -> &[usize] {
        &self.sorted_by_p[j]
    }

    /// Returns a copy with a different theta, revalidating nothing else.
    pub fn with_theta(&self, theta: f64) -> Result<Instance> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Validation(format!(
                "theta must lie in [0, 1], got {theta}"
            )));
        }
        let mut inst = self.clone();
        inst.theta = theta;
        Ok(inst)
    }

    /// Returns a copy with a different K.
    pub fn with_k(&self, k: u32) -> Result<Instance> {
        if k < 2 {
            return Err(Error::Validation(format!("K must be at least 2, got {k}")));
        }
        let mut inst = self.clone();
        inst.k = k;
        Ok(inst)
    }

    /// Number of model variables (open counts, open flags, and two coverage
    /// variables per customer), as reported by benchmark tables.
    pub fn variable_count(&self) -> usize {
        2 * self.n_locations + 2 * self.n_customers
    }

    /// Serializes to the native text format parsed by [`parse_native`].
    pub fn to_native_string(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        writeln!(s, "mpclp 1").unwrap();
        writeln!(s, "locations {}", self.n_locations).unwrap();
        writeln!(s, "customers {}", self.n_customers).unwrap();
        writeln!(s, "k {}", self.k).unwrap();
        writeln!(s, "theta {}", self.theta).unwrap();
        writeln!(s, "demands").unwrap();
        let demands: Vec<String> = self.demand.iter().map(|d| format!("{d}")).collect();
        writeln!(s, "{}", demands.join(" ")).unwrap();
        writeln!(s, "coverage").unwrap();
        for i in 0..self.n_locations {
            let row: Vec<String> = (0..self.n_customers)
                .map(|j| format!("{}", self.rows[j][i]))
                .collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }
}

/// Parses the native line-oriented instance format:
///
/// ```text
/// mpclp 1
/// locations <n>
/// customers <m>
/// k <K>
/// theta <theta>
/// demands
/// <m demand values>
/// coverage
/// <n lines of m coverage values each>   # line i holds p_ij for location i
/// ```
///
/// Blank lines and `#` comments are ignored.
pub fn parse_native(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| {
            let content = l.split('#').next().unwrap_or("").trim();
            (idx + 1, content)
        })
        .filter(|(_, l)| !l.is_empty());

    let mut next = |what: &str| -> Result<(usize, &str)> {
        lines
            .next()
            .ok_or_else(|| Error::Validation(format!("missing field: {what}")))
    };

    let (ln, magic) = next("format header")?;
    if !magic.starts_with("mpclp") {
        return Err(Error::parse(ln, "expected `mpclp <version>` header"));
    }

    let mut parse_kv = |key: &str| -> Result<(usize, String)> {
        let (ln, line) = next(key)?;
        let mut parts = line.split_whitespace();
        let k = parts.next().unwrap_or("");
        let v = parts.next().unwrap_or("");
        if k != key || v.is_empty() {
            return Err(Error::parse(ln, format!("expected `{key} <value>`")));
        }
        Ok((ln, v.to_string()))
    };

    let (ln, v) = parse_kv("locations")?;
    let n_locations: usize = v
        .parse()
        .map_err(|_| Error::parse(ln, "bad location count"))?;
    let (ln, v) = parse_kv("customers")?;
    let n_customers: usize = v
        .parse()
        .map_err(|_| Error::parse(ln, "bad customer count"))?;
    let (ln, v) = parse_kv("k")?;
    let k: u32 = v.parse().map_err(|_| Error::parse(ln, "bad k"))?;
    let (ln, v) = parse_kv("theta")?;
    let theta: f64 = v.parse().map_err(|_| Error::parse(ln, "bad theta"))?;

    let (ln, tag) = next("demands")?;
    if tag != "demands" {
        return Err(Error::parse(ln, "expected `demands`"));
    }
    let (ln, dline) = next("demand values")?;
    let demand: Vec<f64> = dline
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(ln, "bad demand value"))?;
    if demand.len() != n_customers {
        return Err(Error::parse(
            ln,
            format!("expected {} demands, got {}", n_customers, demand.len()),
        ));
    }

    let (ln, tag) = next("coverage")?;
    if tag != "coverage" {
        return Err(Error::parse(ln, "expected `coverage`"));
    }
    let mut coverage = Vec::with_capacity(n_locations);
    for _ in 0..n_locations {
        let (ln, row) = next("coverage row")?;
        let vals: Vec<f64> = row
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(ln, "bad coverage value"))?;
        if vals.len() != n_customers {
            return Err(Error::parse(
                ln,
                format!(
                    "expected {} coverage values, got {}",
                    n_customers,
                    vals.len()
                ),
            ));
        }
        coverage.push(vals);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "unexpected trailing content"));
    }

    Instance::new(coverage, demand, k, theta)
}

/// What preprocessing removed. Indices refer to the original instance.
#[derive(Debug, Clone, Default)]
pub struct PreprocessReport {
    pub removed_locations: Vec<usize>,
    pub removed_customers: Vec<usize>,
    /// Model variables fixed to zero by the removals (y_i and z_i per location).
    pub fixed_variables: usize,
    /// Maps retained location index -> original location index.
    pub location_map: Vec<usize>,
    /// Maps retained customer index -> original customer index.
    pub customer_map: Vec<usize>,
}

/// Removes locations that cover nothing and customers that nothing covers.
/// Both reductions leave the optimal value unchanged: a zero-coverage location
/// never improves the objective (it is non-decreasing and such a facility
/// contributes nothing), and a zero-coverage customer contributes a constant
/// zero. Keeps at least one location and one customer so the instance stays
/// well-formed.
pub fn preprocess(inst: &Instance) -> (Instance, PreprocessReport) {
    let n = inst.n_locations();
    let m = inst.n_customers();

    let mut keep_loc: Vec<usize> = (0..n)
        .filter(|&i| (0..m).any(|j| inst.p(i, j) > 0.0))
        .collect();
    if keep_loc.is_empty() {
        keep_loc.push(0);
    }
    let mut keep_cus: Vec<usize> = (0..m)
        .filter(|&j| keep_loc.iter().any(|&i| inst.p(i, j) > 0.0))
        .collect();
    if keep_cus.is_empty() {
        keep_cus.push(0);
    }

    let removed_locations: Vec<usize> = (0..n).filter(|i| !keep_loc.contains(i)).collect();
    let removed_customers: Vec<usize> = (0..m).filter(|j| !keep_cus.contains(j)).collect();

    let coverage: Vec<Vec<f64>> = keep_loc
        .iter()
        .map(|&i| keep_cus.iter().map(|&j| inst.p(i, j)).collect())
        .collect();
    let demand: Vec<f64> = keep_cus.iter().map(|&j| inst.demand(j)).collect();
    let reduced = Instance::new(coverage, demand, inst.k(), inst.theta())
        .expect("preprocessing of a valid instance stays valid");

    let report = PreprocessReport {
        fixed_variables: 2 * removed_locations.len(),
        removed_locations,
        removed_customers,
        location_map: keep_loc,
        customer_map: keep_cus,
    };
    (reduced, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_pmed() {
        let g = parse_pmed("3 2 1\n1 2 4\n2 3 6\n").unwrap();
        assert_eq!(g.n_vertices, 3);
        assert_eq!(g.p_hint, 1);
        assert_eq!(g.edges, vec![(1, 2, 4.0), (2, 3, 6.0)]);
    }

    #[test]
    fn pmed_empty_input_is_error() {
        assert!(parse_pmed("").is_err());
        assert!(parse_pmed("  \n\n").is_err());
    }

    #[test]
    fn pmed_vertex_out_of_range() {
        let err = parse_pmed("2 1 1\n1 3 5\n").unwrap_err();
        assert!(err.to_string().contains("vertex id out of range"), "{err}");
    }

    #[test]
    fn pmed_negative_cost_and_malformed_line() {
        assert!(parse_pmed("2 1 1\n1 2 -3\n").is_err());
        assert!(parse_pmed("2 1 1\n1 2\n").is_err());
        assert!(parse_pmed("2 1 1\n1 2 4\n9 9 9\n").is_err());
    }

    #[test]
    fn shortest_paths_on_path_graph() {
        let g = parse_pmed("3 2 1\n1 2 4\n2 3 6\n").unwrap();
        let d = all_pairs_shortest_paths(&g);
        assert_eq!(d[0][2], 10.0);
        assert_eq!(d[2][0], 10.0);
        assert_eq!(d[0][0], 0.0);
    }

    #[test]
    fn shortest_paths_single_vertex() {
        let g = RawGraph {
            n_vertices: 1,
            edges: vec![],
            p_hint: 1,
        };
        let d = all_pairs_shortest_paths(&g);
        assert_eq!(d, vec![vec![0.0]]);
    }

    #[test]
    fn shortest_paths_triangle_detour() {
        // Direct edge 10 beats nothing; the 3+4 detour wins.
        let g = parse_pmed("3 3 1\n1 2 3\n2 3 4\n1 3 10\n").unwrap();
        let d = all_pairs_shortest_paths(&g);
        // Oracle: enumerate the three simple paths between 1 and 3.
        let candidates = [10.0, 3.0 + 4.0];
        let expect = candidates.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(d[0][2], expect);
        assert_eq!(expect, 7.0);
    }

    #[test]
    fn coverage_linear_decay() {
        let d = vec![vec![5.0, 12.5, 20.0]];
        let p = build_coverage(&d, 5.0, 20.0).unwrap();
        assert_eq!(p[0][0], 1.0);
        assert!((p[0][1] - 0.5).abs() < 1e-12);
        assert_eq!(p[0][2], 0.0);
    }

    #[test]
    fn coverage_rejects_bad_radii() {
        let d = vec![vec![0.0]];
        assert!(build_coverage(&d, 5.0, 5.0).is_err());
        assert!(build_coverage(&d, 5.0, 4.0).is_err());
    }

    #[test]
    fn coverage_monotone_in_distance() {
        let dists: Vec<f64> = (0..200).map(|t| t as f64 * 0.25).collect();
        let d = vec![dists.clone()];
        let p = build_coverage(&d, 5.0, 20.0).unwrap();
        for w in p[0].windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn native_roundtrip_and_validation() {
        let inst = Instance::new(vec![vec![0.5]], vec![1.0], 2, 0.0).unwrap();
        let text = inst.to_native_string();
        let back = parse_native(&text).unwrap();
        assert_eq!(back.n_locations(), 1);
        assert_eq!(back.n_customers(), 1);
        assert_eq!(back.p(0, 0), 0.5);
        assert_eq!(back.k(), 2);
    }

    #[test]
    fn native_rejects_out_of_range_p() {
        let text = "mpclp 1\nlocations 1\ncustomers 1\nk 2\ntheta 0\ndemands\n1\ncoverage\n1.5\n";
        assert!(parse_native(text).is_err());
    }

    #[test]
    fn native_rejects_nonpositive_demand() {
        let text = "mpclp 1\nlocations 1\ncustomers 1\nk 2\ntheta 0\ndemands\n0\ncoverage\n0.5\n";
        assert!(parse_native(text).is_err());
    }

    #[test]
    fn native_rejects_missing_field() {
        let text = "mpclp 1\nlocations 1\ncustomers 1\nk 2\n";
        assert!(parse_native(text).is_err());
    }

    #[test]
    fn partition_sets_cover_all_locations() {
        let inst = Instance::new(
            vec![vec![1.0, 0.2], vec![0.7, 0.0], vec![1.0 - 1e-13, 1.0]],
            vec![1.0, 1.0],
            2,
            0.5,
        )
        .unwrap();
        for j in 0..2 {
            let mut all: Vec<usize> = inst
                .partial_set(j)
                .iter()
                .chain(inst.full_set(j))
                .cloned()
                .collect();
            all.sort();
            assert_eq!(all, vec![0, 1, 2]);
        }
        // Snap-to-one keeps I_F well-defined.
        assert!(inst.full_set(0).contains(&2));
        assert_eq!(inst.p(2, 0), 1.0);
    }

    #[test]
    fn preprocess_preserves_enumeration_optimum() {
        use crate::oracle::{enumerate_optimal, EnumerationBudget};
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let budget = EnumerationBudget::default();
        for _ in 0..40 {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(1..=5);
            let coverage: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| match rng.gen_range(0..4) {
                            0 => 0.0,
                            1 => 1.0,
                            _ => rng.gen_range(0.0..1.0),
                        })
                        .collect()
                })
                .collect();
            // Force some removable structure now and then.
            let mut coverage = coverage;
            if rng.gen_bool(0.5) {
                let dead = rng.gen_range(0..n);
                coverage[dead] = vec![0.0; m];
            }
            let demand: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..2.0)).collect();
            let theta = rng.gen_range(0.0..=1.0);
            let k = rng.gen_range(2..=3);
            let inst = Instance::new(coverage, demand, k, theta).unwrap();
            let (reduced, _) = preprocess(&inst);
            let (a, _) = enumerate_optimal(&inst, &budget).unwrap();
            let (b, _) = enumerate_optimal(&reduced, &budget).unwrap();
            assert!(
                (a - b).abs() < 1e-9,
                "preprocess changed optimum: {a} vs {b}"
            );
        }
    }

    #[test]
    fn preprocess_removes_zero_rows_and_is_identity_otherwise() {
        let inst = Instance::new(
            vec![vec![0.5, 0.5], vec![0.0, 0.0], vec![0.3, 1.0]],
            vec![1.0, 2.0],
            2,
            0.5,
        )
        .unwrap();
        let (red, rep) = preprocess(&inst);
        assert_eq!(rep.removed_locations, vec![1]);
        assert_eq!(rep.fixed_variables, 2);
        assert_eq!(red.n_locations(), 2);
        assert_eq!(red.p(1, 1), 1.0);

        let (again, rep2) = preprocess(&red);
        assert!(rep2.removed_locations.is_empty());
        assert!(rep2.removed_customers.is_empty());
        assert_eq!(again.n_locations(), red.n_locations());
    }
}
