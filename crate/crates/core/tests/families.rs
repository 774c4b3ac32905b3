use galileo_core::translation::{closed_form_type4, FamilyKind};
use galileo_core::verify::{certify_family, sample_family, TheoremId};
use galileo_core::{Family32, FamilyParams, Jet1, Rect, Surface32};

#[test]
fn params_from_json_build_and_sample() {
    let scenes = [
        (r#"{"kind":"type1","f":"u^2","g":"v^2"}"#, FamilyKind::Standard),
        (
            r#"{"kind":"affine","matrix":[[1,1],[0,1]],"f":"u^2/2","g":"-v^2/2"}"#,
            FamilyKind::Affine,
        ),
        (
            r#"{"kind":"constant_k_type1","k0":-2,"c":1}"#,
            FamilyKind::ConstantKType1,
        ),
        (
            r#"{"kind":"cmc_cylinder_b_i","h0":1,"matrix":[[1,0],[0,1]],"f":"u"}"#,
            FamilyKind::CmcCylinderBI,
        ),
        (
            r#"{"kind":"parabolic_ruled","matrix":[[1,1],[0,1]],"c1":1}"#,
            FamilyKind::ParabolicRuled,
        ),
        (
            r#"{"kind":"ruled_type_c","x":"0","y":"2*u","z":"1"}"#,
            FamilyKind::RuledTypeC,
        ),
    ];
    for (json, kind) in scenes {
        let p: FamilyParams = serde_json::from_str(json).unwrap();
        assert_eq!(p.kind(), kind);
        let fam = p.build::<f64>(None).unwrap();
        let r = sample_family(&fam, 9, 9, 1e-8, None).unwrap();
        assert!(r.usable && r.failures.is_empty(), "{json}");
        let back: FamilyParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn single_precision_families() {
    let p = FamilyParams::Type3Circle {
        h0: 1.0,
        f1: "u^2".into(),
        f2: "u^3".into(),
    };
    let fam: Family32 = p.build(None).unwrap();
    let h: Vec<f32> = fam
        .surface()
        .domain()
        .grid(7, 7)
        .into_iter()
        .map(|(u, v)| fam.surface().curvatures(u, v).unwrap().h_paper)
        .collect();
    assert!(h.iter().all(|x| (x.abs() - 1.0).abs() < 1e-4), "{h:?}");
    let c = certify_family(TheoremId::HType3, &fam, 7, 7).unwrap();
    assert_eq!(c.theorem, TheoremId::HType3);

    let s = Surface32::parse(
        ["u", "v"],
        ["u", "v", "u^2+v^2"],
        Rect::new((-1.0, 1.0), (-1.0, 1.0)).unwrap(),
    )
    .unwrap();
    assert_eq!(s.gaussian_curvature(0.0, 0.0).unwrap(), 4.0);
}

#[test]
fn type4_closed_form_degenerates_honestly() {
    // f2' = a and f1' = g' together make W vanish
    let f = Jet1::new(0.0, 1.0, 2.0, 0.0);
    let g = Jet1::new(0.0, 1.0, 0.0, 0.0);
    assert!(closed_form_type4(f, f, g, 1.0).is_none());
    assert!(closed_form_type4(f, f, g, 0.5).is_some());
}
