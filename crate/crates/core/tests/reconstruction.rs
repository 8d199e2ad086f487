use epd_core::field::parse_phantom;
use epd_core::reconstruct::reconstruct_field;
use epd_core::transform::generate_dataset;
use epd_core::{AnnulusGeometry, Error, PriorSide, RunConfig, ScalarField};

fn small(prior: PriorSide) -> RunConfig {
    let g = AnnulusGeometry::new(1.0, 3.0, 0.6, Some(3.4)).unwrap();
    let mut c = RunConfig::with_defaults(2, g);
    c.m_max = 3;
    c.angular_points = 16;
    c.quad_order = 96;
    c.s_points = 81;
    c.prior = prior;
    c
}

fn dataset_of(field: &ScalarField, c: &RunConfig) -> epd_core::SphericalMeanDataset {
    generate_dataset(field, &c.geometry, &c.sampling().unwrap(), c.quad_order)
        .unwrap()
        .dataset
}

#[test]
fn zero_data_and_zero_prior_give_zero() {
    let c = small(PriorSide::Interior);
    let zero = ScalarField::zero(2).unwrap();
    let rec = reconstruct_field(&dataset_of(&zero, &c), &zero, &c).unwrap();
    for p in &rec.profiles {
        assert_eq!(p.max_abs(), 0.0, "mode {}", p.mode);
    }
}

#[test]
fn kernel_element_is_recovered_from_its_prior() {
    let c = small(PriorSide::Interior);
    let f = parse_phantom(2, "kernel-element(m=2, l=2, i=1, c=-0.7)").unwrap();
    let data = dataset_of(&f, &c);
    assert!(data.max_abs_value() < 1e-8);
    let rec = reconstruct_field(&data, &f, &c).unwrap();
    let (lo, hi) = c.trimmed_range();
    assert!(rec.error_against(&f, lo, hi).unwrap() < 0.01);
}

#[test]
fn zero_prior_misses_the_kernel_component() {
    let c = small(PriorSide::Interior);
    let f = parse_phantom(2, "kernel-element(m=1, i=0, c=1.0)").unwrap();
    let rec = reconstruct_field(&dataset_of(&f, &c), &ScalarField::zero(2).unwrap(), &c).unwrap();
    let (lo, hi) = c.trimmed_range();
    assert!(rec.error_against(&f, lo, hi).unwrap() > 0.5);
}

#[test]
fn both_prior_sides_recover_low_modes() {
    let f = parse_phantom(
        2,
        "mode-bump(m=0, center=2.0, width=0.5); mode-bump(m=1, l=2, center=1.9, width=0.5, amplitude=0.6)",
    )
    .unwrap();
    let interior = small(PriorSide::Interior);
    let data = dataset_of(&f, &interior);
    let (lo, hi) = interior.trimmed_range();
    for side in [PriorSide::Interior, PriorSide::Exterior] {
        let rec = reconstruct_field(&data, &f, &small(side)).unwrap();
        let err = rec.error_against(&f, lo, hi).unwrap();
        assert!(err < 0.01, "{side}: {err:.3e}");
    }
}

#[test]
fn exterior_prior_without_outer_radius_is_a_config_error() {
    let g = AnnulusGeometry::new(1.0, 3.0, 0.6, None).unwrap();
    let mut c = RunConfig::with_defaults(2, g);
    c.prior = PriorSide::Exterior;
    assert!(matches!(c.validate(), Err(Error::Config(_))));
}

#[test]
fn noise_is_reproducible_for_a_seed() {
    let c = small(PriorSide::Interior);
    let f = parse_phantom(2, "radial-gaussian-ring(center=2.0, width=0.5)").unwrap();
    let clean = dataset_of(&f, &c);
    let mut a = clean.clone();
    let mut b = clean.clone();
    a.add_noise(1e-3, 11).unwrap();
    b.add_noise(1e-3, 11).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let mut z = clean.clone();
    z.add_noise(0.0, 11).unwrap();
    assert_eq!(z.to_csv(), clean.to_csv());
}
