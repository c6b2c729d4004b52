//! The named fixture corpus: canonical polytopes ("cube 3", "simplex 4",
//! "cross 4", "ngon 6", "pyramid 3"), zonotopes from generic configurations
//! ("generic 3 5 1"), and the builtin angle valuations. The directory in
//! ANGLEKIT_FIXTURES, when set, is consulted first and may override any name
//! with a JSON file.

use std::path::PathBuf;

use num_traits::One;

use crate::angle::{BodyOracle, ConeAngleSpec};
use crate::error::Error;
use crate::linalg::RatVec;
use crate::polytope::Polytope;
use crate::rat::{rat, ratio, Rat};
use crate::zonotope::{generic_configuration, zonotope, GeneratorConfiguration};

/// A resolved fixture: always a polytope; zonotope-backed fixtures also
/// carry their generator configuration.
pub struct Fixture {
    pub name: String,
    pub polytope: Polytope,
    pub configuration: Option<GeneratorConfiguration>,
}

pub fn fixture_dir() -> Option<PathBuf> {
    std::env::var_os("ANGLEKIT_FIXTURES").map(PathBuf::from)
}

fn try_fixture_file(name: &str) -> Result<Option<Fixture>, Error> {
    let Some(dir) = fixture_dir() else { return Ok(None) };
    let candidates = [
        dir.join(format!("{name}.json")),
        dir.join(format!("{}.json", name.replace(' ', "_"))),
    ];
    for path in candidates {
        if path.is_file() {
            let text = std::fs::read_to_string(&path)?;
            let json: serde_json::Value = serde_json::from_str(&text)?;
            if json.get("generators").is_some() {
                let cfg = GeneratorConfiguration::from_json(&json)?;
                let p = zonotope(&cfg)?;
                return Ok(Some(Fixture {
                    name: name.to_string(),
                    polytope: p,
                    configuration: Some(cfg),
                }));
            }
            let p = Polytope::from_json(&json)?;
            return Ok(Some(Fixture {
                name: name.to_string(),
                polytope: p,
                configuration: None,
            }));
        }
    }
    Ok(None)
}

pub fn cube(d: usize) -> Polytope {
    let mut verts = Vec::new();
    for mask in 0..(1u32 << d) {
        let coords: Vec<i64> =
            (0..d).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
        verts.push(RatVec::from_ints(&coords));
    }
    Polytope::new(verts).expect("cube vertices are extreme")
}

pub fn cube_configuration(d: usize) -> GeneratorConfiguration {
    GeneratorConfiguration::new((0..d).map(|i| RatVec::unit(d, i)).collect(), d).unwrap()
}

pub fn simplex(d: usize) -> Polytope {
    let mut verts = vec![RatVec::zeros(d)];
    for i in 0..d {
        verts.push(RatVec::unit(d, i));
    }
    Polytope::new(verts).expect("simplex vertices are extreme")
}

pub fn cross_polytope(d: usize) -> Polytope {
    let mut verts = Vec::new();
    for i in 0..d {
        verts.push(RatVec::unit(d, i));
        verts.push(RatVec::unit(d, i).neg());
    }
    Polytope::new(verts).expect("cross-polytope vertices are extreme")
}

/// Pyramid over a (d-1)-cube with apex above the center.
pub fn pyramid(d: usize) -> Polytope {
    assert!(d >= 2);
    let mut verts = Vec::new();
    for mask in 0..(1u32 << (d - 1)) {
        let mut coords: Vec<i64> =
            (0..d - 1).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
        coords.push(0);
        verts.push(RatVec::from_ints(&coords));
    }
    let mut apex = vec![0i64; d];
    apex[d - 1] = 1;
    verts.push(RatVec::from_ints(&apex));
    Polytope::new(verts).expect("pyramid vertices are extreme")
}

/// Convex n-gon with rational vertices on the unit circle, approximately
/// regular: points ((1-t^2)/(1+t^2), 2t/(1+t^2)) for rational t close to
/// tan(pi k / n). Exactly regular n-gons have irrational coordinates for
/// most n; the combinatorics (and all identities verified here) only need a
/// convex polygon with rational data.
pub fn ngon(n: usize) -> Result<Polytope, Error> {
    if n < 3 {
        return Err(Error::Invalid("an n-gon needs n >= 3".into()));
    }
    if n > 64 {
        return Err(Error::Invalid("n-gon fixtures stop at n = 64".into()));
    }
    let mut verts = Vec::new();
    for k in 0..n {
        let theta = std::f64::consts::PI * k as f64 / n as f64; // half-angle
        let point = if (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
            RatVec::new(vec![rat(-1), rat(0)])
        } else {
            let t_approx = theta.tan();
            let denom = 1024i64;
            let t = ratio((t_approx * denom as f64).round() as i64, denom);
            let t2 = &t * &t;
            let one_plus = &t2 + Rat::one();
            let x = (Rat::one() - &t2) / &one_plus;
            let y = (&t + &t) / &one_plus;
            RatVec::new(vec![x, y])
        };
        verts.push(point);
    }
    Polytope::new(verts)
}

/// Canonical builtin valuations: the standard angle, the body angle against
/// a shifted non-convex union of boxes, and the point-limit angle at
/// q = (1, 0, ..., 0).
pub fn builtin_specs(dim: usize) -> Vec<ConeAngleSpec> {
    vec![
        ConeAngleSpec::standard(),
        ConeAngleSpec::body(BodyOracle::canonical(dim)),
        ConeAngleSpec::point_limit(point_limit_q(dim)),
    ]
}

pub fn point_limit_q(dim: usize) -> RatVec {
    let mut q = vec![0i64; dim];
    q[0] = 1;
    RatVec::from_ints(&q)
}

/// Resolves an angle-spec argument: a builtin name or a JSON file path.
pub fn angle_spec(arg: &str, dim: usize) -> Result<ConeAngleSpec, Error> {
    match arg {
        "standard" => Ok(ConeAngleSpec::standard()),
        "body" => Ok(ConeAngleSpec::body(BodyOracle::canonical(dim))),
        "point_limit" | "point-limit" => Ok(ConeAngleSpec::point_limit(point_limit_q(dim))),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Invalid(format!("`{path}` is neither a builtin spec nor a readable file: {e}"))
            })?;
            ConeAngleSpec::from_json(&serde_json::from_str(&text)?)
        }
    }
}

/// Resolves a fixture name: the override directory first, then the builtin
/// grammar: "cube d" | "simplex d" | "cross d" | "ngon n" | "pyramid d" |
/// "generic d n seed" | "square" | "hexagon".
pub fn fixture(name: &str) -> Result<Fixture, Error> {
    if let Some(f) = try_fixture_file(name)? {
        return Ok(f);
    }
    let tokens: Vec<&str> = name.split_whitespace().collect();
    let parse_num = |s: &str| -> Result<usize, Error> {
        s.parse().map_err(|_| Error::UnknownFixture(name.to_string()))
    };
    let built = match tokens.as_slice() {
        // bare names default to dimension three
        ["cube"] => return fixture("cube 3"),
        ["simplex"] => return fixture("simplex 3"),
        ["cross"] => return fixture("cross 3"),
        ["square"] => Fixture {
            name: name.into(),
            polytope: cube(2),
            configuration: Some(cube_configuration(2)),
        },
        ["hexagon"] => {
            let cfg = generic_configuration(2, 3, 1);
            Fixture { name: name.into(), polytope: zonotope(&cfg)?, configuration: Some(cfg) }
        }
        ["cube", d] => {
            let d = parse_num(d)?;
            Fixture {
                name: name.into(),
                polytope: cube(d),
                configuration: Some(cube_configuration(d)),
            }
        }
        ["simplex", d] => Fixture {
            name: name.into(),
            polytope: simplex(parse_num(d)?),
            configuration: None,
        },
        ["cross", d] => Fixture {
            name: name.into(),
            polytope: cross_polytope(parse_num(d)?),
            configuration: None,
        },
        ["pyramid", d] => Fixture {
            name: name.into(),
            polytope: pyramid(parse_num(d)?),
            configuration: None,
        },
        ["ngon", n] => Fixture {
            name: name.into(),
            polytope: ngon(parse_num(n)?)?,
            configuration: None,
        },
        ["generic", d, n, seed] => {
            let cfg = generic_configuration(parse_num(d)?, parse_num(n)?, parse_num(seed)? as u64);
            Fixture { name: name.into(), polytope: zonotope(&cfg)?, configuration: Some(cfg) }
        }
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_fixtures_build() {
        assert_eq!(fixture("cube 3").unwrap().polytope.f_vector(), vec![8, 12, 6]);
        assert_eq!(fixture("simplex 3").unwrap().polytope.f_vector(), vec![4, 6, 4]);
        assert_eq!(fixture("cross 4").unwrap().polytope.f_vector(), vec![8, 24, 32, 16]);
        assert_eq!(fixture("square").unwrap().polytope.f_vector(), vec![4, 4]);
        assert_eq!(fixture("hexagon").unwrap().polytope.f_vector(), vec![6, 6]);
        assert_eq!(fixture("ngon 5").unwrap().polytope.f_vector(), vec![5, 5]);
        assert_eq!(fixture("pyramid 3").unwrap().polytope.f_vector(), vec![5, 8, 5]);
    }

    #[test]
    fn generic_fixture_carries_configuration() {
        let f = fixture("generic 3 4 1").unwrap();
        assert!(f.configuration.is_some());
        assert_eq!(f.polytope.dim(), 3);
    }

    #[test]
    fn unknown_fixture_rejected() {
        assert!(matches!(fixture("dodecahedron"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn ngon_vertices_on_unit_circle() {
        let p = fixture("ngon 7").unwrap().polytope;
        for v in p.vertices() {
            let norm2 = v.dot(v);
            assert_eq!(norm2, rat(1));
        }
    }

    #[test]
    fn fixture_dir_override() {
        let dir = std::env::temp_dir().join(format!("anglekit-fixtures-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(
            dir.join("tiny.json"),
            r#"{"vertices": [[0], ["1/2"]]}"#,
        )
        .unwrap();
        // env manipulation: keep it local to this test
        std::env::set_var("ANGLEKIT_FIXTURES", &dir);
        let f = fixture("tiny").unwrap();
        std::env::remove_var("ANGLEKIT_FIXTURES");
        assert_eq!(f.polytope.dim(), 1);
        std::fs::remove_dir_all(&dir).ok();
    }
}
