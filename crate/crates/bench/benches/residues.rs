use criterion::{black_box, criterion_group, criterion_main, Criterion};
use parchi::diagonal_trees::enumerate_diagonal;
use parchi::euler_formulas::{chi_line, chi_vector, clear_kernel_cache};
use parchi::laurent_engine::{exp_series, inv_one_minus_exp, LinearFormY};
use parchi::rational::{q, qf};
use parchi::root_system::chamber_point_near_theta;
use parchi::{CoVector, EulerQuery, EvalOptions, HighestWeight, LatticePoint};

const FAST: EvalOptions = EvalOptions { check_stability: false };

fn query(r: usize, g: i64, k: i64, lambda: &[i64], nus: Vec<HighestWeight>) -> EulerQuery {
    let c = if r == 2 {
        CoVector::new(vec![qf(3, 10), qf(-3, 10)]).unwrap()
    } else {
        chamber_point_near_theta(r, true).unwrap()
    };
    EulerQuery::new(
        g,
        k,
        LatticePoint::from_i64s(lambda).unwrap(),
        nus,
        c,
        enumerate_diagonal(r).unwrap(),
    )
    .unwrap()
}

fn bench_chi(c: &mut Criterion) {
    let q2 = query(2, 3, 4, &[1, -1], vec![]);
    c.bench_function("chi_line r=2 g=3 k=4 cold", |b| {
        b.iter(|| {
            clear_kernel_cache();
            chi_line(black_box(&q2), &FAST).unwrap()
        })
    });
    let q3 = query(3, 2, 2, &[1, 0, -1], vec![]);
    c.bench_function("chi_line r=3 g=2 k=2 cold", |b| {
        b.iter(|| {
            clear_kernel_cache();
            chi_line(black_box(&q3), &FAST).unwrap()
        })
    });
    c.bench_function("chi_line r=3 g=2 k=2 cached kernel", |b| {
        b.iter(|| chi_line(black_box(&q3), &FAST).unwrap())
    });
    let qv = query(3, 2, 1, &[0, 0, 0], vec![HighestWeight::new(vec![1, 0, 0]).unwrap()]);
    c.bench_function("chi_vector r=3 nu=(1,0,0) cold", |b| {
        b.iter(|| {
            clear_kernel_cache();
            chi_vector(black_box(&qv), &FAST).unwrap()
        })
    });
}

fn bench_series(c: &mut Criterion) {
    let a = LinearFormY::new(vec![q(3), q(1)]);
    let bform = LinearFormY::new(vec![q(0), q(5)]);
    let cap = 12;
    let e = exp_series(&a, None, cap).unwrap();
    let d = inv_one_minus_exp(&bform, cap).unwrap();
    c.bench_function("two-variable series product", |b| {
        b.iter(|| black_box(&e).mul_capped(black_box(&d), cap))
    });
}

criterion_group!(benches, bench_chi, bench_series);
criterion_main!(benches);
