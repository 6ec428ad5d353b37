mod common;

use catrw::dpo::PocSystem;
use catrw::gc::RGR;
use catrw::hpo::HpoSystem;
use catrw::pushout::PushoutSystem;
use catrw::span::{SpanKind, SpanSystem};
use catrw::spo::SpoSystem;
use catrw::sqpo::{Fpbc1System, Fpbc2System};
use common::*;

const N: usize = 300;

fn check(name: &str, t: Tally) {
    println!("{name}: {}", t.summary());
    assert!(t.clean(), "{name}: {}", t.summary());
    assert!(t.holds >= N && t.identity_checked >= N, "{name}: too few instances: {}", t.summary());
}

#[test]
fn pushout_laws() {
    check("po", run_laws(&PushoutSystem, N, 1, po_instance, always));
}

#[test]
fn spo_laws() {
    check("spo", run_laws(&SpoSystem, N, 2, spo_instance, always));
}

#[test]
fn poc_laws() {
    check("poc", run_laws(&PocSystem, N, 3, |r| inverse_instance(r, true, false), always));
}

#[test]
fn fpbc_laws() {
    check("fpbc1", run_laws(&Fpbc1System, N, 4, |r| inverse_instance(r, true, false), always));
    check("fpbc2", run_laws(&Fpbc2System, N, 5, |r| inverse_instance(r, false, true), always));
}

#[test]
fn span_laws() {
    for (i, kind) in [SpanKind::Dpo, SpanKind::Sqpo1, SpanKind::Sqpo2].into_iter().enumerate() {
        let sys = SpanSystem::new(kind);
        check(&kind.to_string(), run_laws(&sys, N, 6 + i as u64, |r| span_instance(r, kind), always));
    }
}

#[test]
fn hpo_laws() {
    check("hpo", run_laws(&HpoSystem, N, 9, hpo_instance, always));
}

#[test]
fn rgr_laws() {
    check("rgr", run_laws(&RGR, N, 10, gc_instance, successor_closed));
}
