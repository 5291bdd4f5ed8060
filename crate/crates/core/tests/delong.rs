use rxval_core::{delong_compare, RngStream};

fn pairwise_auroc(s: &[f64], y: &[u8]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..s.len() {
        for j in 0..s.len() {
            if y[i] == 1 && y[j] == 0 {
                den += 1.0;
                num += if s[i] > s[j] {
                    1.0
                } else if s[i] == s[j] {
                    0.5
                } else {
                    0.0
                };
            }
        }
    }
    num / den
}

#[test]
fn variance_agrees_with_stratified_bootstrap() {
    let mut rng = RngStream::from_seed(77);
    let y: Vec<u8> = (0..20).map(|i| (i < 9) as u8).collect();
    let a: Vec<f64> = y.iter().map(|&l| l as f64 + 1.2 * rng.uniform()).collect();
    let b: Vec<f64> = a.iter().map(|x| x + 0.8 * rng.uniform()).collect();
    let var = delong_compare(&a, &b, &y).unwrap().variance;

    let pos: Vec<usize> = (0..20).filter(|&i| y[i] == 1).collect();
    let neg: Vec<usize> = (0..20).filter(|&i| y[i] == 0).collect();
    let reps = 10_000;
    let mut diffs = Vec::with_capacity(reps);
    for _ in 0..reps {
        let mut idx: Vec<usize> = (0..pos.len()).map(|_| pos[rng.index(pos.len())]).collect();
        idx.extend((0..neg.len()).map(|_| neg[rng.index(neg.len())]));
        let yy: Vec<u8> = idx.iter().map(|&i| y[i]).collect();
        let aa: Vec<f64> = idx.iter().map(|&i| a[i]).collect();
        let bb: Vec<f64> = idx.iter().map(|&i| b[i]).collect();
        diffs.push(pairwise_auroc(&aa, &yy) - pairwise_auroc(&bb, &yy));
    }
    let m = diffs.iter().sum::<f64>() / reps as f64;
    let boot = diffs.iter().map(|d| (d - m).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
    assert!(
        (var - boot).abs() / boot <= 0.10,
        "delong {var} bootstrap {boot}"
    );
}

#[test]
fn null_p_values_are_uniform() {
    let mut rng = RngStream::from_seed(78);
    let mut ps = Vec::new();
    for _ in 0..200 {
        let y: Vec<u8> = (0..60).map(|_| (rng.uniform() < 0.5) as u8).collect();
        if y.iter().filter(|&&l| l == 1).count() < 2 || y.iter().filter(|&&l| l == 0).count() < 2 {
            continue;
        }
        let a: Vec<f64> = (0..60).map(|_| rng.uniform()).collect();
        let b: Vec<f64> = (0..60).map(|_| rng.uniform()).collect();
        ps.push(delong_compare(&a, &b, &y).unwrap().test.p_value);
    }
    ps.sort_by(f64::total_cmp);
    let n = ps.len() as f64;
    let ks = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i + 1) as f64 / n - p).max(p - i as f64 / n))
        .fold(0.0, f64::max);
    assert!(ks <= 0.15, "KS distance {ks}");
}
