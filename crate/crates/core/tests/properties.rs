use cayley_core::hermitian::hermitian_product;
use cayley_core::hexagon::certify_generalized_polygon;
use cayley_core::quadric::{field_reduce_vector, hyperbolic_form, lift_vector};
use cayley_core::unitary::image_of_subgenerator;
use cayley_core::{Field, FieldElement, HermitianSurface, IncidenceGeometry, Level, NormClasses, Subspace, Vector};
use proptest::prelude::*;
use std::sync::OnceLock;

fn field(q: usize) -> &'static Field {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    &FIELDS.get_or_init(|| [2, 3, 4, 5].iter().map(|&q| Field::new(q).unwrap()).collect())[[2, 3, 4, 5].iter().position(|&x| x == q).unwrap()]
}

fn setup(q: usize) -> &'static (HermitianSurface, NormClasses) {
    static Q2: OnceLock<(HermitianSurface, NormClasses)> = OnceLock::new();
    static Q3: OnceLock<(HermitianSurface, NormClasses)> = OnceLock::new();
    let cell = if q == 2 { &Q2 } else { &Q3 };
    cell.get_or_init(|| {
        let s = HermitianSurface::new(Field::new(q).unwrap());
        let c = NormClasses::new(&s).unwrap();
        (s, c)
    })
}

fn vector(f: &Field, level: Level, idx: &[usize]) -> Vector {
    let els = f.elements(level);
    Vector::from_slice(&idx.iter().map(|&i| els[i % els.len()]).collect::<Vec<_>>())
}

fn q_strategy() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 4, 5])
}

proptest! {
    #[test]
    fn norm_is_multiplicative_and_trace_additive(q in q_strategy(), a in 0usize..625, b in 0usize..625) {
        let f = field(q);
        let els = f.elements(Level::Extension);
        let (x, y) = (els[a % els.len()], els[b % els.len()]);
        prop_assert_eq!(f.norm(f.mul(x, y)), f.mul(f.norm(x), f.norm(y)));
        prop_assert_eq!(f.trace(f.add(x, y)), f.add(f.trace(x), f.trace(y)));
        prop_assert_eq!(f.conj(f.conj(x)), x);
        prop_assert!(f.in_subfield(f.norm(x)) && f.in_subfield(f.trace(x)));
    }

    #[test]
    fn dimension_formula_in_pg4(q in prop::sample::select(vec![2usize, 3]),
                                u in prop::collection::vec(prop::collection::vec(0usize..9, 5), 1..4),
                                w in prop::collection::vec(prop::collection::vec(0usize..9, 5), 1..4)) {
        let f = field(q);
        let su = Subspace::span(f, 5, u.iter().map(|r| vector(f, Level::Base, r)));
        let sw = Subspace::span(f, 5, w.iter().map(|r| vector(f, Level::Base, r)));
        prop_assert_eq!(su.join(f, &sw).rank() + su.meet(f, &sw).rank(), su.rank() + sw.rank());
        prop_assert!(su.join(f, &sw).contains(f, &su));
        prop_assert!(su.contains(f, &su.meet(f, &sw)));
    }

    #[test]
    fn reduced_form_is_hermitian_norm(q in prop::sample::select(vec![2usize, 3, 4]), x in prop::collection::vec(0usize..256, 4), y in prop::collection::vec(0usize..256, 4)) {
        let f = field(q);
        let form = hyperbolic_form(f);
        let (x, y) = (vector(f, Level::Extension, &x), vector(f, Level::Extension, &y));
        let (rx, ry) = (field_reduce_vector(f, &x), field_reduce_vector(f, &y));
        prop_assert_eq!(lift_vector(f, &rx), x);
        prop_assert_eq!(form.eval(f, &rx), hermitian_product(f, &x, &x));
        prop_assert_eq!(form.polar(f, &rx, &ry), f.trace(hermitian_product(f, &x, &y)));
        let sum = rx.add(f, &ry);
        prop_assert_eq!(form.polar(f, &rx, &ry), f.sub(f.sub(form.eval(f, &sum), form.eval(f, &rx)), form.eval(f, &ry)));
    }

    #[test]
    fn norm_transports_along_generator_words(q in prop::sample::select(vec![2usize, 3]), b in 0usize..10_000, word in prop::collection::vec(0usize..64, 0..8)) {
        let (s, c) = setup(q);
        let f = s.field();
        let gu = c.gu();
        let b0 = (b % s.subgenerators().len()) as u32;
        let mut b = b0;
        let mut det = FieldElement::ONE;
        for g in word.iter().map(|g| g % gu.len()) {
            b = image_of_subgenerator(s, gu.permutation(g), b);
            det = f.mul(det, gu.generators()[g].det());
        }
        prop_assert_eq!(c.norm(b), f.mul(c.norm(b0), det));
    }

    #[test]
    fn girth_and_diameter_match_floyd_warshall(points in 2usize..7, lines in 2usize..7, bits in prop::collection::vec(any::<bool>(), 36)) {
        let inc: Vec<(u32, u32)> = (0..points)
            .flat_map(|p| (0..lines).map(move |l| (p, l)))
            .filter(|&(p, l)| bits[p * 6 + l])
            .map(|(p, l)| (p as u32, l as u32))
            .collect();
        let g = IncidenceGeometry::from_incidences(points, lines, &inc).unwrap();
        let cert = certify_generalized_polygon(&g, 3);
        let n = points + lines;
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(p, l) in &inc {
            let (a, b) = (p as usize, points + l as usize);
            d[a][b] = 1;
            d[b][a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        let connected = d.iter().all(|r| r.iter().all(|&x| x < inf));
        prop_assert_eq!(cert.connected, connected);
        if connected {
            prop_assert_eq!(cert.diameter, d.iter().flatten().copied().max());
        }
        // shortest cycle through edge (a,b): d(a,b) with that edge removed, plus one
        let mut girth: Option<usize> = None;
        for &(p, l) in &inc {
            let (a, b) = (p as usize, points + l as usize);
            let mut dist = vec![inf; n];
            dist[a] = 0;
            let mut queue = std::collections::VecDeque::from([a]);
            while let Some(v) = queue.pop_front() {
                for &(pp, ll) in &inc {
                    let (x, y) = (pp as usize, points + ll as usize);
                    if (x, y) == (a, b) {
                        continue;
                    }
                    for (u, w) in [(x, y), (y, x)] {
                        if u == v && dist[w] == inf {
                            dist[w] = dist[v] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
            if dist[b] < inf {
                girth = Some(girth.map_or(dist[b] + 1, |g| g.min(dist[b] + 1)));
            }
        }
        prop_assert_eq!(cert.girth, girth);
        if let Some(c) = &cert.witness_cycle {
            prop_assert_eq!(Some(c.len()), girth);
        }
    }
}
