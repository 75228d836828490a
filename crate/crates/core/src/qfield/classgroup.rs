use num_integer::Integer;

use super::field::FieldCtx;
use super::ideal::Ideal;

/// Reduced primitive positive definite forms `(a, b, c)` of discriminant `disc`.
pub fn reduced_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    let disc = disc as i128;
    let mut out = Vec::new();
    let amax = ((-disc as f64 / 3.0).sqrt()).floor() as i128 + 1;
    for a in 1..=amax {
        for b in -a..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push((a as i64, b as i64, c as i64));
        }
    }
    out
}

/// One integral ideal per class, from the reduced forms: `(a,b,c) ↦ aℤ + ((−b+√Δ)/2)ℤ`.
/// The principal class comes first, then the rest by norm.
pub fn reduced_form_ideals(k: &FieldCtx) -> Vec<Ideal> {
    let mut reps: Vec<Ideal> = reduced_forms(k.disc())
        .into_iter()
        .map(|(a, b, _)| {
            let (a, b) = (a as i128, b as i128);
            let x0 = if k.disc() == 4 * k.d() { -b / 2 } else { -(b + 1) / 2 };
            Ideal::from_hnf(k, a, x0.rem_euclid(a), 1).expect("reduced forms give ideals")
        })
        .collect();
    reps.sort_by_key(|r| (!r.is_unit(), r.norm(), r.hnf()));
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        for (d, h) in [(-1, 1), (-2, 1), (-3, 1), (-5, 2), (-6, 2), (-14, 4), (-23, 3), (-47, 5), (-71, 7), (-17, 4)] {
            let k = FieldCtx::new(d).unwrap();
            assert_eq!(k.class_number(), h, "d={d}");
            assert!(k.class_reps()[0].is_unit());
        }
    }

    #[test]
    fn reps_are_pairwise_inequivalent() {
        for d in [-5, -14, -23, -71] {
            let k = FieldCtx::new(d).unwrap();
            for (i, r) in k.class_reps().iter().enumerate() {
                assert_eq!(r.class_index(&k).unwrap(), i);
            }
        }
    }
}
