mod props;

#[test]
fn rref_idempotence() {
    props::rref_idempotent().unwrap();
}

#[test]
fn rank_nullity() {
    props::rank_nullity().unwrap();
}

#[test]
fn pi_homomorphism() {
    props::pi_homomorphism().unwrap();
}

#[test]
fn pi_grading() {
    props::pi_grading().unwrap();
}

#[test]
fn reduction_idempotence_and_multigrading() {
    props::reduction_properties().unwrap();
}

#[test]
fn canonical_rotation_invariance() {
    props::rotation_invariance().unwrap();
}

#[test]
fn thread_count_determinism() {
    props::thread_determinism().unwrap();
}
