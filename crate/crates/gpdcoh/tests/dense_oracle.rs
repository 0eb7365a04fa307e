//! Cross-checks the sparse elimination engine against an independent,
//! naively written dense Gaussian elimination, and checks degree-zero
//! cohomology against an averaging construction over isotropy groups.

use gpdcoh::cochain::{rep_complex, ruth_complex};
use gpdcoh::complex::ChainComplex;
use gpdcoh::examples::{ExampleCoefficients, ExampleRegistry};
use gpdcoh::groupoid::FiniteGroupoid;
use gpdcoh::matrix::{self, SparseMat};
use gpdcoh::randgen::RandGen;
use gpdcoh::rat::Rat;
use gpdcoh::rep::Representation;
use num::Zero;

fn dense_rows(m: &SparseMat) -> Vec<Vec<Rat>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Textbook row reduction, written without reference to the sparse engine.
fn dense_rank(mut rows: Vec<Vec<Rat>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let pivot_row = (rank..rows.len()).find(|r| !rows[*r][c].is_zero());
        let Some(p) = pivot_row else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &pivot;
                for cc in c..cols {
                    let sub = &rows[rank][cc] * &factor;
                    rows[r][cc] = &rows[r][cc] - &sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn dense_cohomology_dims(cx: &ChainComplex, k_max: usize) -> Vec<usize> {
    (0..=k_max)
        .map(|k| {
            let rank_out = dense_rank(dense_rows(cx.differential(k)), cx.dim(k));
            let rank_in = if k == 0 {
                0
            } else {
                dense_rank(dense_rows(cx.differential(k - 1)), cx.dim(k - 1))
            };
            cx.dim(k) - rank_out - rank_in
        })
        .collect()
}

#[test]
fn sparse_rank_matches_dense_rank() {
    let mut gen = RandGen::new(11);
    for rows in 0..7usize {
        for cols in 0..7usize {
            for _ in 0..4 {
                let m = gen.matrix(rows, cols);
                assert_eq!(
                    matrix::rank(&m),
                    dense_rank(dense_rows(&m), cols),
                    "{rows}x{cols}"
                );
            }
        }
    }
}

#[test]
fn kernel_basis_matches_dense_nullity() {
    let mut gen = RandGen::new(12);
    for _ in 0..40 {
        let rows = gen.range(0, 6);
        let cols = gen.range(0, 6);
        let m = gen.matrix(rows, cols);
        let basis = matrix::kernel_basis(&m);
        assert_eq!(basis.len(), cols - dense_rank(dense_rows(&m), cols));
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }
}

#[test]
fn solve_agrees_with_dense_consistency_test() {
    let mut gen = RandGen::new(13);
    for _ in 0..40 {
        let rows = gen.range(1, 6);
        let cols = gen.range(1, 6);
        let a = gen.matrix(rows, cols);
        let b = if gen.coin() {
            a.mul_vec(&gen.vector(cols))
        } else {
            gen.vector(rows)
        };
        let mut augmented = dense_rows(&a);
        for (row, v) in augmented.iter_mut().zip(&b) {
            row.push(v.clone());
        }
        let consistent =
            dense_rank(augmented, cols + 1) == dense_rank(dense_rows(&a), cols);
        match matrix::solve_many(&a, &[b.clone()]).remove(0) {
            Some(x) => {
                assert!(consistent, "sparse solved an inconsistent system");
                assert_eq!(a.mul_vec(&x), b);
            }
            None => assert!(!consistent, "sparse rejected a consistent system"),
        }
    }
}

#[test]
fn builtin_cohomology_matches_dense_rank_route() {
    let expected: &[(&str, Vec<usize>)] = &[
        ("s3", vec![1, 0, 0, 0]),
        ("zmod3", vec![1, 0, 0, 0]),
        ("pair3", vec![1, 0, 0, 0]),
        ("unit3", vec![3, 0, 0, 0]),
        ("gauge-z2-p4", vec![0, 0, 0, 0]),
        ("cone-trivial", vec![1, 1, 0, 0]),
        ("cone-id", vec![0, 0, 0, 0]),
        ("twisted-cone", vec![1, 1, 0, 0]),
    ];
    let reg = ExampleRegistry::builtin();
    for (name, dims) in expected {
        let data = reg.build(name).unwrap();
        let cx = match &data.coefficients {
            Some(ExampleCoefficients::Rep(e)) => {
                rep_complex(&data.groupoid, e, 3).unwrap()
            }
            Some(ExampleCoefficients::Ruth(r)) => {
                ruth_complex(&data.groupoid, r, 3).unwrap()
            }
            None => unreachable!(),
        };
        assert_eq!(&cx.cohomology_dims(3).unwrap(), dims, "{name} engine");
        assert_eq!(&dense_cohomology_dims(&cx, 3), dims, "{name} dense");
    }
}

/// An invariant section is determined by a `G_x`-fixed vector at one
/// object per connected component, so `dim H⁰` equals the summed rank of
/// the isotropy-averaging projectors over component representatives.
fn averaged_invariants(gpd: &FiniteGroupoid, rep: &Representation) -> usize {
    let mut component = (0..gpd.n_objects()).collect::<Vec<usize>>();
    fn root(component: &mut Vec<usize>, x: usize) -> usize {
        if component[x] == x {
            x
        } else {
            let r = root(component, component[x]);
            component[x] = r;
            r
        }
    }
    for g in 0..gpd.n_arrows() {
        let a = root(&mut component, gpd.src(g));
        let b = root(&mut component, gpd.tgt(g));
        component[a] = b;
    }
    let mut total = 0;
    for x in 0..gpd.n_objects() {
        if root(&mut component, x) != x {
            continue;
        }
        let isotropy: Vec<usize> = (0..gpd.n_arrows())
            .filter(|g| gpd.src(*g) == x && gpd.tgt(*g) == x)
            .collect();
        let n = rep.dims[x];
        let mut avg = vec![vec![Rat::zero(); n]; n];
        for g in &isotropy {
            for i in 0..n {
                for j in 0..n {
                    avg[i][j] += rep.act[*g].get(i, j);
                }
            }
        }
        let order: Rat = Rat::from_integer((isotropy.len() as i64).into());
        for row in avg.iter_mut() {
            for v in row.iter_mut() {
                *v = &*v / &order;
            }
        }
        // rank of a projector = dimension of its fixed space
        total += dense_rank(avg, n);
    }
    total
}

#[test]
fn degree_zero_matches_isotropy_averaging() {
    let reg = ExampleRegistry::builtin();
    for entry in reg.iter() {
        let data = entry.build().unwrap();
        if let Some(ExampleCoefficients::Rep(e)) = &data.coefficients {
            let cx = rep_complex(&data.groupoid, e, 1).unwrap();
            assert_eq!(
                cx.cohomology_dims(1).unwrap()[0],
                averaged_invariants(&data.groupoid, e),
                "{}",
                entry.name()
            );
        }
    }
    let mut gen = RandGen::new(14);
    for _ in 0..10 {
        let g = gen.small_groupoid(8);
        let e = gen.rep_bounded(&g, 4);
        let cx = rep_complex(&g, &e, 1).unwrap();
        assert_eq!(cx.cohomology_dims(1).unwrap()[0], averaged_invariants(&g, &e));
    }
}
