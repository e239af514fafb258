mod common;

use common::*;
use largeness::certificate::{verify_certificate, CertificateMode, LargenessCertificate};
use largeness::coset::{low_index_subgroups, LowIndexOptions};
use largeness::determinant::{det_int, det_uni};
use largeness::driver::{prove_large, ProveOptions};
use largeness::fox::{fox_derivative, fox_derivative_uni, fundamental_identity_holds, Poly, UniPoly};
use largeness::lattice::{free_abelianisation, invariants_of_relations, smith_normal_form};
use largeness::word::{Letter, Word};
use largeness::GroupPresentation;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn word_strategy(n_gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..n_gens, any::<bool>()), 1..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(gen, inverse)| Letter { gen, inverse })))
}

fn presentation_strategy(max_gens: usize, max_rels: usize, max_len: usize) -> impl Strategy<Value = GroupPresentation> {
    (1..=max_gens, 1..=max_rels).prop_flat_map(move |(n, m)| {
        prop::collection::vec(word_strategy(n, max_len), m)
            .prop_map(move |rels| GroupPresentation::with_default_names(n, rels.into_iter().map(|w| w.free_reduce()).collect()).unwrap())
    })
}

fn mpoly_of(p: &Poly) -> MPoly {
    tidy(p.terms().map(|(e, c)| (e.clone(), c.to_i128().unwrap())).collect())
}

fn upoly_to_lib(p: &IPoly) -> UniPoly {
    UniPoly::from_sparse(p.iter().map(|(e, c)| (*e, BigInt::from(*c))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    /// Fox derivatives match a letter-by-letter expansion, and the fundamental formula holds.
    #[test]
    fn fox_calculus_matches_oracle(
        g in presentation_strategy(4, 3, 14),
        raw_alpha in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4),
        b in 1usize..=3,
    ) {
        let alpha: Vec<Vec<i64>> = raw_alpha[..g.n_gens()].iter().map(|v| v[..b].to_vec()).collect();
        let images: Vec<i64> = alpha.iter().map(|v| v[0]).collect();
        for w in g.relators() {
            for j in 0..g.n_gens() {
                prop_assert_eq!(mpoly_of(&fox_derivative(w, j, &alpha)), fox_oracle_multi(w, j, &alpha));
                prop_assert_eq!(from_lib(&fox_derivative_uni(w, j, &images)), fox_oracle(w, j, &images));
            }
            prop_assert!(fundamental_identity_holds(w, &alpha));
            // Independent check of the same identity in the oracle ring.
            let mut lhs = IPoly::new();
            for j in 0..g.n_gens() {
                lhs = padd(&lhs, &pmul(&fox_oracle(w, j, &images), &padd(&mono(images[j], 1), &mono(0, -1))));
            }
            let total: i64 = w.letters().map(|l| l.sign() * images[l.gen]).sum();
            prop_assert_eq!(lhs, padd(&mono(total, 1), &mono(0, -1)));
        }
    }

    /// Deficiency one: `N_j (t^{a_k} - 1) = (-1)^{j+k} N_k (t^{a_j} - 1)` for the maximal minors.
    #[test]
    fn cross_column_minor_identity(
        n in 2usize..=4,
        rels in prop::collection::vec(word_strategy(4, 10), 3),
        chi_raw in prop::collection::vec(-2i64..=2, 4),
    ) {
        let rels: Vec<Word> = rels.into_iter().take(n - 1)
            .map(|w| Word::from_letters(w.letters().map(|l| Letter { gen: l.gen % n, inverse: l.inverse })).free_reduce())
            .collect();
        let g = GroupPresentation::with_default_names(n, rels).unwrap();
        let fa = free_abelianisation(&g);
        prop_assume!(fa.invariants.rank >= 1);
        let chi = &chi_raw[..fa.invariants.rank];
        let images: Vec<i64> = fa.images.iter().map(|v| v.iter().zip(chi).map(|(a, c)| a * c).sum()).collect();
        let m: Vec<Vec<IPoly>> = g.relators().iter().map(|r| (0..n).map(|j| fox_oracle(r, j, &images)).collect()).collect();
        let minors: Vec<IPoly> = (0..n)
            .map(|j| det_ipoly(&m.iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect::<Vec<_>>()))
            .collect();
        // Library determinant agrees with the cofactor oracle.
        for j in 0..n {
            let sub: Vec<Vec<UniPoly>> = m.iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| upoly_to_lib(v)).collect()).collect();
            prop_assert_eq!(from_lib(&det_uni(&sub).unwrap()), minors[j].clone());
        }
        let v = |j: usize| padd(&mono(images[j], 1), &mono(0, -1));
        for j in 0..n {
            for k in 0..n {
                let lhs = pmul(&minors[j], &v(k));
                let rhs = pmul(&minors[k], &v(j));
                let rhs = if (j + k) % 2 == 0 { rhs } else { pneg(&rhs) };
                prop_assert_eq!(lhs, rhs, "columns {} and {}", j, k);
            }
        }
    }

    /// Products of the first k Smith invariants equal the gcd of the k x k minors.
    #[test]
    fn smith_form_matches_minor_gcds(rows in 1usize..=5, cols in 1usize..=5, seed in prop::collection::vec(-6i64..=6, 25)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 5 + c]).collect()).collect();
        let snf = smith_normal_form(&m, cols, true);
        let mi: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
        let mut prod: i128 = 1;
        for k in 1..=rows.min(cols) {
            prod *= snf.invariants[k - 1] as i128;
            prop_assert_eq!(prod, minor_gcd(&mi, k), "k = {}", k);
        }
        for w in snf.invariants.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        // left * M * right is the diagonal.
        let (l, r) = (snf.left.unwrap(), snf.right.unwrap());
        for i in 0..rows {
            for j in 0..cols {
                let mut s: i128 = 0;
                for a in 0..rows {
                    for b in 0..cols {
                        s += l[i][a] as i128 * m[a][b] as i128 * r[b][j] as i128;
                    }
                }
                let want = if i == j { snf.invariants[i] as i128 } else { 0 };
                prop_assert_eq!(s, want);
            }
        }
    }

    /// Abelian invariants of a relation matrix agree with the minor-gcd chain.
    #[test]
    fn abelian_invariants_match_minor_gcds(rows in 1usize..=6, cols in 1usize..=6, seed in prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], 36)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 6 + c]).collect()).collect();
        let inv = invariants_of_relations(&m, cols);
        let mi: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
        let mut chain = Vec::new();
        let mut prev = 1i128;
        for k in 1..=rows.min(cols) {
            let g = minor_gcd(&mi, k);
            if g == 0 {
                break;
            }
            chain.push(g / prev);
            prev = g;
        }
        let torsion: Vec<u64> = chain.iter().filter(|d| **d != 1).map(|d| *d as u64).collect();
        let got: Vec<u64> = inv.torsion.iter().map(|d| d.to_u64().unwrap()).collect();
        prop_assert_eq!(got, torsion);
        prop_assert_eq!(inv.rank, cols - chain.len());
    }

    /// Bareiss agrees with Laplace expansion over Z and over Z[t^{±1}].
    #[test]
    fn determinant_matches_cofactor(
        n in 0usize..=5,
        ints in prop::collection::vec(-9i64..=9, 25),
        polys in prop::collection::vec(prop::collection::btree_map(-2i64..=2, -3i128..=3, 0..3), 25),
    ) {
        let mi: Vec<Vec<i128>> = (0..n).map(|r| (0..n).map(|c| ints[r * 5 + c] as i128).collect()).collect();
        let mb: Vec<Vec<BigInt>> = mi.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        prop_assert_eq!(det_int(&mb), BigInt::from(det_i128(&mi)));
        let mp: Vec<Vec<IPoly>> = (0..n).map(|r| (0..n).map(|c| tidy(polys[r * 5 + c].clone())).collect()).collect();
        let ml: Vec<Vec<UniPoly>> = mp.iter().map(|r| r.iter().map(upoly_to_lib).collect()).collect();
        prop_assert_eq!(from_lib(&det_uni(&ml).unwrap()), det_ipoly(&mp));
    }

    /// A polynomial killed by `t -> (t^{k_1},...,t^{k_b})` stays zero after wrapping or boxing.
    #[test]
    fn wrap_and_box_are_sound(
        b in 2usize..=3,
        q_choice in 0usize..3,
        i_raw in 0usize..3,
        k_raw in prop::collection::vec(-3i64..=3, 3),
        r in prop::collection::vec(-2i64..=2, 3),
        u in prop::collection::vec(-3i64..=3, 3),
        cofactor in prop::collection::btree_map(prop::collection::vec(-2i64..=2, 3), -4i64..=4, 1..5),
    ) {
        let q = [2i64, 3, 5][q_choice];
        let i = i_raw % b;
        let mut k: Vec<i64> = k_raw[..b].iter().map(|v| v * q).collect();
        k[i] = {
            let mut v = k_raw[i];
            while v.rem_euclid(q) == 0 {
                v += 1;
            }
            v
        };
        // A kernel vector of k.
        let w: Vec<i64> = if b == 2 {
            vec![k[1], -k[0]]
        } else {
            vec![k[1] * r[2] - k[2] * r[1], k[2] * r[0] - k[0] * r[2], k[0] * r[1] - k[1] * r[0]]
        };
        let u = &u[..b];
        let v: Vec<i64> = u.iter().zip(&w).map(|(a, c)| a + c).collect();
        let diff = Poly::from_terms(b, [(u.to_vec(), BigInt::from(1)), (v, BigInt::from(-1))]);
        let qpoly = Poly::from_terms(b, cofactor.into_iter().map(|(e, c)| (e[..b].to_vec(), BigInt::from(c))));
        let p = qpoly.mul(&diff);
        prop_assert!(p.evaluate_chi(&k).is_zero());
        prop_assert!(p.wrap(i, q as u64).is_zero());
        for prime in [2u64, 3, 5, 7] {
            let boxed = p.boxed(prime);
            for c in 1..prime as i64 {
                let kc: Vec<i64> = k.iter().map(|x| x * c).collect();
                prop_assert!(boxed.evaluate(&kc).iter().all(|x| *x == BigInt::from(0)));
            }
        }
    }

    /// Boxing commutes with evaluation: folding `P(t^k)` mod `t^p - 1` only sees `k mod p`.
    #[test]
    fn box_matches_fold(
        terms in prop::collection::btree_map(prop::collection::vec(-4i64..=4, 2), -5i64..=5, 1..6),
        k in prop::collection::vec(-6i64..=6, 2),
        shift in prop::collection::vec(-2i64..=2, 2),
    ) {
        let p = Poly::from_terms(2, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))));
        for prime in [2u64, 3, 5, 7] {
            let folded = p.evaluate_chi(&k).fold_mod(prime);
            let moved: Vec<i64> = k.iter().zip(&shift).map(|(a, s)| a + s * prime as i64).collect();
            prop_assert_eq!(p.boxed(prime).evaluate(&moved), folded);
        }
    }

    /// Subgroup counts agree with counting transitive permutation representations.
    #[test]
    fn subgroup_counts_match_permutation_census(rels in prop::collection::vec(word_strategy(2, 8), 0..3)) {
        let g = GroupPresentation::with_default_names(2, rels.into_iter().map(|w| w.free_reduce()).collect()).unwrap();
        let out = low_index_subgroups(&g, &LowIndexOptions::new(1, 4)).unwrap();
        prop_assert!(out.complete);
        for n in 1..=4 {
            let lib: usize = out.records.iter().filter(|r| r.index() == n).map(|r| r.table.conjugacy_class_size()).sum();
            prop_assert_eq!(lib as u128, permutation_census(&g, n), "index {}", n);
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of index-`n` subgroups: transitive actions on `n` points, divided by `(n-1)!`.
fn permutation_census(g: &GroupPresentation, n: usize) -> u128 {
    let perms = permutations(n);
    let inverse = |p: &Vec<usize>| {
        let mut q = vec![0; p.len()];
        for (i, &v) in p.iter().enumerate() {
            q[v] = i;
        }
        q
    };
    let mut count = 0u128;
    for a in &perms {
        for b in &perms {
            let gens = [a.clone(), b.clone()];
            let invs = [inverse(a), inverse(b)];
            let act = |x: usize, l: Letter| if l.inverse { invs[l.gen][x] } else { gens[l.gen][x] };
            let kills = g.relators().iter().all(|r| (0..n).all(|x| r.letters().fold(x, |y, l| act(y, l)) == x));
            if !kills {
                continue;
            }
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for y in [a[x], b[x]] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen.iter().all(|s| *s) {
                count += 1;
            }
        }
    }
    (1..n as u128).fold(count, |c, d| c / d)
}

#[test]
fn free_group_of_rank_two_subgroup_counts() {
    let g = GroupPresentation::parse("gens a b").unwrap();
    let out = low_index_subgroups(&g, &LowIndexOptions::new(1, 4)).unwrap();
    let totals: Vec<u128> = (1..=4)
        .map(|n| out.records.iter().filter(|r| r.index() == n).map(|r| r.table.conjugacy_class_size() as u128).sum())
        .collect();
    let classes: Vec<usize> = (1..=4).map(|n| out.records.iter().filter(|r| r.index() == n).count()).collect();
    let hall = hall_counts(2, 4);
    assert_eq!(totals, hall[1..].to_vec());
    assert_eq!(totals, vec![1, 3, 13, 71]);
    assert_eq!(classes, vec![1, 3, 7, 26]);
    assert_eq!((1..=4).map(|n| permutation_census(&g, n)).collect::<Vec<_>>(), totals);
}

fn certificate_fixtures() -> Vec<(GroupPresentation, LargenessCertificate)> {
    let cases: &[(&str, usize, Option<(usize, usize)>)] = &[
        ("gens a t\nrel ta2TA4", 1, None),
        ("gens a t\nrel ta3TA6", 1, None),
        ("gens a t\nrel ta2TA4\nrel t3", 4, None),
        ("gens a t\nrel ta2TA4t2", 1, Some((2, 4))),
        ("gens a t u\nrel ta2TA4t3", 1, None),
    ];
    cases
        .iter()
        .map(|(text, max, normal)| {
            let g = GroupPresentation::parse(text).unwrap();
            let mut o = ProveOptions::new(*max);
            o.normal_range = *normal;
            let r = prove_large(&g, &o).unwrap();
            let c = r.certificate.unwrap_or_else(|| panic!("{text} should certify"));
            (g, c)
        })
        .collect()
}

#[test]
fn every_emitted_certificate_verifies_and_round_trips() {
    let fixtures = certificate_fixtures();
    let indices: Vec<Vec<usize>> = fixtures.iter().map(|(_, c)| c.chain_indices()).collect();
    assert_eq!(indices, vec![vec![1], vec![1], vec![3], vec![1, 2], vec![1]]);
    for (g, c) in fixtures {
        assert!(verify_certificate(&g, &c).ok);
        let text = LargenessCertificate::parse_text(&c.to_text()).unwrap();
        assert_eq!(text, c);
        let json = LargenessCertificate::from_json(&c.to_json()).unwrap();
        assert_eq!(json, c);
        assert!(verify_certificate(&g, &text).ok);
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    for (g, c) in certificate_fixtures() {
        let CertificateMode::Alexander { images, modulus, deleted_column, minors } = c.mode.clone() else {
            panic!("expected an Alexander certificate")
        };
        let with_mode = |mode| LargenessCertificate { mode, ..c.clone() };

        // Vanishing over Z implies vanishing mod every prime, so only a prime modulus can be falsified.
        if modulus != 0 {
            let bad_modulus = if modulus == 3 { 5 } else { 3 };
            let t = with_mode(CertificateMode::Alexander { images: images.clone(), modulus: bad_modulus, deleted_column, minors: minors.clone() });
            assert!(!verify_certificate(&g, &t).ok, "modulus {bad_modulus} accepted");
            let t = with_mode(CertificateMode::Alexander { images: images.clone(), modulus: 0, deleted_column, minors: minors.clone() });
            assert!(!verify_certificate(&g, &t).ok, "modulus 0 accepted");
        }
        let t = with_mode(CertificateMode::Alexander { images: images.clone(), modulus: 4, deleted_column, minors: minors.clone() });
        assert!(!verify_certificate(&g, &t).ok, "composite modulus accepted");

        let scaled: Vec<i64> = images.iter().map(|v| v * 2).collect();
        let t = with_mode(CertificateMode::Alexander { images: scaled, modulus, deleted_column, minors: minors.clone() });
        assert!(!verify_certificate(&g, &t).ok, "non-primitive images accepted");

        if let Some(first) = minors.first() {
            let mut changed = minors.clone();
            changed[0].polynomial = format!("{} + 1", first.polynomial);
            let t = with_mode(CertificateMode::Alexander { images: images.clone(), modulus, deleted_column, minors: changed });
            assert!(!verify_certificate(&g, &t).ok, "altered minor accepted");
        }

        // Corrupt the last coset table: redirect one generator's action.
        let mut t = c.clone();
        let last = t.chain.last_mut().unwrap();
        let mut rows = last.rows();
        if rows.len() > 1 {
            rows[0][0] = ((rows[0][0] as usize + 1) % rows.len()) as u32;
            if let Ok(table) = largeness::coset::CosetTable::from_rows(last.n_gens(), &rows) {
                *last = table;
                assert!(!verify_certificate(&g, &t).ok, "corrupted table accepted");
            }
        }

        // A different group.
        let other = GroupPresentation::parse("gens a t\nrel taTA2").unwrap();
        assert!(!verify_certificate(&other, &c).ok);
        let mut t = c.clone();
        t.witness = other.clone();
        assert!(!verify_certificate(&g, &t).ok);
    }
}

#[test]
fn hall_recursion_small_values() {
    // Free group of rank one has exactly one subgroup of each index.
    assert_eq!(hall_counts(1, 6)[1..].to_vec(), vec![1; 6]);
}
