mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surfcurve::curve::{classify_from_signature, mu_from_walk, Sidedness};
use surfcurve::constructions::merge_to_simple_cycle;
use surfcurve::cut::cut_edges;
use surfcurve::loops::{hitting_paths, standard_loops};
use surfcurve::overlay::Overlay;
use surfcurve::solver::Prepared;

use common::{corpus, random_closed_walk, template_word};

#[test]
fn standard_loops_on_the_corpus() {
    for inst in corpus() {
        for x in [inst.map.clone(), inst.map.dual().map] {
            let g = x.euler_genus();
            let sys = standard_loops(&x).unwrap();
            assert_eq!(sys.word_string(), template_word(g), "{}", inst.name);
            sys.check_disk(&x).unwrap();
            let ov = Overlay::build(&x, &sys.arrangement).unwrap();
            let all: Vec<usize> = (0..g).collect();
            assert!(cut_edges(&ov.map, &ov.curve_edges(&all)).is_disk(), "{}", inst.name);
            let first = if g % 2 == 1 { "z" } else { "y" };
            for i in 0..g {
                let side = sys.sidedness(&x, i).unwrap();
                match sys.names[i].as_str() {
                    n if n == first => assert_eq!(side, Sidedness::OneSided, "{}", inst.name),
                    "w" => assert_eq!(side, Sidedness::TwoSided, "{}", inst.name),
                    _ => {}
                }
            }
        }
    }
}

#[test]
fn hitting_paths_meet_nontrivial_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for inst in corpus() {
        let prep = Prepared::new(&inst.map).unwrap();
        let hp = hitting_paths(&prep.g);
        assert_eq!(hp.paths.len(), 2 * prep.genus());
        let on_path = {
            let mut v = vec![false; prep.g.num_vertices()];
            for x in hp.vertices() {
                v[x] = true;
            }
            v
        };
        for _ in 0..40 {
            let walk = random_closed_walk(&prep.g, &mut rng, 12);
            // A nonzero Z2 signature certifies the walk is not contractible.
            if prep.loops.signature_of_walk(&walk).bits.is_zero() {
                continue;
            }
            let verts = walk.vertices(&prep.g).unwrap();
            assert!(verts.iter().any(|&v| on_path[v]), "{}", inst.name);
            checked += 1;
        }
    }
    assert!(checked >= 1000, "only {} non-contractible walks", checked);
}

#[test]
fn signatures_classify_like_cutting() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for inst in corpus() {
        let m = &inst.map;
        let prep = Prepared::new(m).unwrap();
        for i in 0..200 {
            let walk = random_closed_walk(&prep.g, &mut rng, 1 + i % 15);
            if walk.is_trivial() {
                continue;
            }
            let sig = prep.loops.signature_of_walk(&walk).to_canonical(&prep.phi).unwrap();
            let mu: Vec<usize> = mu_from_walk(&walk, m.num_edges()).into_iter().map(usize::from).collect();
            let c = merge_to_simple_cycle(m, &mu).unwrap();
            assert!(c.is_simple(m));
            assert_eq!(
                classify_from_signature(&sig, prep.genus()).unwrap(),
                c.classify_by_cutting(m).unwrap(),
                "{} walk {}",
                inst.name,
                i
            );
        }
    }
}
