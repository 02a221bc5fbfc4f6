use criterion::{black_box, criterion_group, criterion_main, Criterion};

use csrbf_core::{fit, Kernel, KernelFamily, LandmarkCorrespondence, Point2, Rect};

fn landmark_grid(n: usize) -> LandmarkCorrespondence {
    let mut source = Vec::new();
    let mut target = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = Point2::new(i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            source.push(p);
            target.push(Point2::new(
                p.x + 0.01 * ((i + j) % 3) as f64,
                p.y - 0.01 * (i % 2) as f64,
            ));
        }
    }
    LandmarkCorrespondence::new(source, target).unwrap()
}

fn bench_kernel_eval(c: &mut Criterion) {
    let k = Kernel::new(KernelFamily::GNEITING_SEVEN_HALVES, 1.0).unwrap();
    c.bench_function("kernel_value_gneiting_7_2", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..1000 {
                acc += k.value(black_box(i as f64 / 1000.0));
            }
            acc
        })
    });
    c.bench_function("kernel_deriv_gneiting_7_2", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..1000 {
                acc += k.deriv(black_box(i as f64 / 1000.0));
            }
            acc
        })
    });
}

fn bench_fit(c: &mut Criterion) {
    let lm = landmark_grid(6); // 36 landmarks
    let k = Kernel::new(KernelFamily::Wendland31, 0.5).unwrap();
    c.bench_function("fit_36_landmarks", |b| {
        b.iter(|| fit(k, black_box(&lm)).unwrap())
    });
}

fn bench_det_field(c: &mut Criterion) {
    let lm = LandmarkCorrespondence::new(vec![Point2::new(0.5, 0.5)], vec![Point2::new(0.6, 0.7)])
        .unwrap();
    let t = fit(
        Kernel::new(KernelFamily::GNEITING_SEVEN_HALVES, 1.02).unwrap(),
        &lm,
    )
    .unwrap();
    c.bench_function("det_field_200x200", |b| {
        b.iter(|| t.det_field(black_box(Rect::unit()), 200, 200).unwrap())
    });
}

criterion_group!(benches, bench_kernel_eval, bench_fit, bench_det_field);
criterion_main!(benches);
