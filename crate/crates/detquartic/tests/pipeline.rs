use detquartic::catalog::{find, load_default, load_fixture};
use detquartic::mesh::march;
use detquartic::search::{
    append_found, deform_starts, load_tracker, run_search_parallel, save_tracker, tracker_from_verdicts,
};
use detquartic::verify::{verify_all, VerifyOptions};
use detquartic_core::search::{
    prepare_deform, run_search, tracker_update, SearchConfig, SearchTarget, TrackerState,
};
use detquartic_core::singularities::{profile, SolverConfig};
use detquartic_core::x2::{cp15_to_quadric, hermitian_to_cp15, web_parameters};
use detquartic_core::{Error as CoreError, GMatrix, GaussianRational, Rational};
use num_traits::Zero;

fn real(p: &[Rational]) -> Vec<GaussianRational> {
    p.iter().cloned().map(GaussianRational::real).collect()
}

#[test]
fn tracker_after_catalog_matches_the_table() {
    let entries = load_default().unwrap();
    let opts = VerifyOptions { lines: 20, ..VerifyOptions::default() };
    let verdicts = verify_all(&entries, &opts);
    assert!(verdicts.iter().all(|v| v.profile_matches()));
    let t = tracker_from_verdicts(TrackerState::new(), &verdicts);
    let row3 = t.row(3);
    assert_eq!(row3.found, [(3, 3), (3, 2), (3, 1), (3, 0), (1, 1), (1, 0)].into_iter().collect());
    assert!(row3.missing.is_empty());
    assert_eq!(t.row(4).missing, [(2, 0)].into_iter().collect());
    for eta in [0, 1, 2, 3, 4, 5, 6, 7] {
        assert!(t.row(eta).paper_known.is_subset(&t.row(eta).found), "η = {eta}");
    }
    // all three η = 8 cells of the table are realised by the catalog as well
    assert!(t.row(8).paper_known.is_subset(&t.row(8).found));
    assert!(t.row(10).found.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tracker.json");
    save_tracker(&path, &t).unwrap();
    assert_eq!(load_tracker(&path).unwrap(), t);
    assert_eq!(load_tracker(&dir.path().join("absent.json")).unwrap(), TrackerState::new());
}

#[test]
fn rank_only_fixture_is_not_a_catalog_entry() {
    let ex = load_fixture("3/example").unwrap();
    assert!(ex.rank_only && ex.e.is_none() && ex.claimed.is_none());
    assert!(load_default().unwrap().iter().all(|e| e.name != "3/example"));
}

#[test]
fn deformation_from_eight_nodes() {
    let entries = load_default().unwrap();
    let start = &find(&entries, "4.9/(8,6,4)").unwrap().pencil;
    let cfg = SolverConfig::default();
    let ds = prepare_deform(start, &cfg).unwrap();
    assert!(!ds.moves.is_empty());
    for seed in 0..3 {
        let cand = ds.draw_seeded(seed).unwrap();
        let prof = profile(&cand, None, &cfg).unwrap();
        assert!(!prof.degenerate);
        assert!(prof.eta >= 4, "seed {seed}: η = {}", prof.eta);
    }
}

#[test]
fn identity_deformation_is_a_change_of_coordinates() {
    let entries = load_default().unwrap();
    let start = &find(&entries, "4.9/(8,6,4)").unwrap().pencil;
    let ds = prepare_deform(start, &SolverConfig::default()).unwrap();
    let h = ds.anchor_matrix(0).unwrap();
    let ef = ds.web(0).unwrap();
    let params = web_parameters(&ef, &cp15_to_quadric(&hermitian_to_cp15(&h))).unwrap();
    let new = ds.deform_with(0, &params).unwrap();
    assert_eq!(new.coeff(0), &h);

    // new(y) = start(T y) with the columns of T = (P₁, q₁, q₂, q₃)
    let (a, pl) = ds.moves[0];
    let cols: Vec<&[Rational; 4]> = std::iter::once(&ds.anchors[a]).chain(ds.planes[pl].basis.iter()).collect();
    let t = GMatrix::new(4, 4, (0..16).map(|k| GaussianRational::real(cols[k % 4][k / 4].clone())).collect());
    assert!(!t.determinant().is_zero());
    let (f, g) = (start.det().unwrap(), new.det().unwrap());
    for y in [[1, 0, 0, 0], [1, 2, -1, 3], [0, 1, 1, -2], [2, -3, 5, 1]] {
        let ye: Vec<GaussianRational> = y.iter().map(|&v| GaussianRational::from_ints(v, 0)).collect();
        let tx = t.mul(&GMatrix::new(4, 1, ye.clone()));
        let tx: Vec<GaussianRational> = (0..4).map(|i| tx.get(i, 0).clone()).collect();
        assert_eq!(new.eval_exact(&ye).unwrap(), start.eval_exact(&tx).unwrap());
        assert_eq!(g.eval_exact(&ye).unwrap(), f.eval_exact(&tx).unwrap());
    }
}

#[test]
fn smooth_start_cannot_deform() {
    let entries = load_default().unwrap();
    let start = &find(&entries, "4.1/(0,0,0)").unwrap().pencil;
    assert!(matches!(prepare_deform(start, &SolverConfig::default()), Err(CoreError::Precondition(_))));
    assert!(deform_starts(&entries[..1], &SolverConfig::default()).is_empty());
}

#[test]
fn parallel_search_matches_sequential() {
    let cfg = SearchConfig { budget: 40, max_hits: Some(3), ..SearchConfig::default() };
    let target = SearchTarget::new(3, 1, 0).unwrap();
    let a = run_search(&target, &[0, 1], &cfg, &[]);
    let b = run_search_parallel(&target, &[0, 1], &cfg, &[]);
    assert_eq!(a.stats, b.stats);
    assert_eq!(a.found.len(), 3);
    let idx = |o: &detquartic_core::search::SearchOutcome| o.found.iter().map(|f| (f.seed, f.index)).collect::<Vec<_>>();
    assert_eq!(idx(&a), idx(&b));
}

#[test]
fn search_reaches_the_missing_four_node_cell() {
    let cfg = SearchConfig { budget: 64, ..SearchConfig::default() };
    let target = SearchTarget::new(4, 2, 0).unwrap();
    let out = run_search_parallel(&target, &[0], &cfg, &[]);
    assert_eq!(out.found.len(), 1, "{:?}", out.stats);
    let hit = &out.found[0];
    assert!(hit.pencil.is_definite_at(&real(&hit.e)).unwrap().is_definite());
    // exact check of the two real points: corank 2, off the spectrahedron
    let real_pts: Vec<_> = hit.profile.points.iter().filter(|s| s.is_essential() && s.is_real).collect();
    assert_eq!(real_pts.len(), 2);
    assert!(real_pts.iter().all(|s| s.pencil_corank == 2 && s.on_spectrahedron == Some(false)));

    let t = tracker_update(TrackerState::new(), hit);
    assert_eq!(t.row(4).bonus, [(2, 0)].into_iter().collect());

    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("found.ndjson");
    append_found(&log, &out.found).unwrap();
    append_found(&log, &out.found).unwrap();
    let text = std::fs::read_to_string(&log).unwrap();
    assert_eq!(text.lines().count(), 2);
    let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(v["target"]["eta"], 4);
    let pencil = detquartic::format::PencilJson::from_str(&v["pencil"].to_string()).unwrap();
    assert_eq!(pencil.pencil().unwrap(), hit.pencil);
}

#[test]
fn zero_node_surface_mesh_has_a_closed_component() {
    let entries = load_default().unwrap();
    let e = find(&entries, "4.1/(0,0,0)").unwrap();
    let m = march(&e.pencil.det().unwrap(), 3, 64, 3.0).unwrap();
    assert!(!m.vertices.is_empty());
    let (components, closed) = m.components();
    assert!(components >= 1 && closed >= 1, "{components} components, {closed} closed");
    let obj = m.to_obj("t");
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), m.vertices.len());
}
