//! JSON encoding of values.
//!
//! ```text
//! {"tag":"unit"}
//! {"tag":"cube","coords":[{"key":"a0","value":"a3"}, {"key":"a1","value":1}]}
//! {"tag":"pair","fst":…,"snd":…}
//! {"tag":"abs","bound":"a0","body":…}
//! {"tag":"base","value":…}
//! {"tag":"upbox"|"downbox","box":BOX}
//! {"tag":"plus"|"minus","bound":"a0","box":BOX}
//! BOX = {"kind":"up"|"down","dir":"a0","faces":[{"name":"a0","bit":0,"term":…}],"base":…}
//! ```

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::kan::{BoxKind, OpenBox};
use crate::nominal::Name;
use crate::value::{CubePoint, CubeVal, KTerm, Node, Value};
use crate::zsub::Bit;

pub fn value_to_json(v: &Value) -> Json {
    match v.node() {
        Node::Unit => json!({ "tag": "unit" }),
        Node::Cube(p) => json!({
            "tag": "cube",
            "coords": p.coords().iter().map(|(k, c)| json!({
                "key": k.to_string(),
                "value": match c {
                    CubeVal::Name(a) => json!(a.to_string()),
                    CubeVal::Bit(b) => json!(b.as_u8()),
                },
            })).collect::<Vec<_>>(),
        }),
        Node::Pair(x, y) => {
            json!({ "tag": "pair", "fst": value_to_json(x), "snd": value_to_json(y) })
        }
        Node::Abs(abs) => json!({
            "tag": "abs",
            "bound": abs.bound().to_string(),
            "body": value_to_json(abs.body()),
        }),
        Node::Term(KTerm::Base(x)) => json!({ "tag": "base", "value": value_to_json(x) }),
        Node::Term(KTerm::Filler(bx)) => json!({
            "tag": match bx.kind() { BoxKind::Up => "upbox", BoxKind::Down => "downbox" },
            "box": box_to_json(bx),
        }),
        Node::Term(KTerm::Composite(abs)) => json!({
            "tag": match abs.body().kind() { BoxKind::Up => "plus", BoxKind::Down => "minus" },
            "bound": abs.bound().to_string(),
            "box": box_to_json(abs.body()),
        }),
    }
}

pub fn box_to_json(bx: &OpenBox) -> Json {
    json!({
        "kind": bx.kind().to_string(),
        "dir": bx.dir().to_string(),
        "faces": bx.faces().iter().map(|((b, i), t)| json!({
            "name": b.to_string(),
            "bit": i.as_u8(),
            "term": value_to_json(t),
        })).collect::<Vec<_>>(),
        "base": value_to_json(bx.base()),
    })
}

/// Compact text with sorted keys.
pub fn to_string(v: &Value) -> String {
    value_to_json(v).to_string()
}

pub fn from_str(s: &str) -> Result<Value> {
    let j: Json =
        serde_json::from_str(s).map_err(|e| Error::schema("$", format!("invalid JSON: {e}")))?;
    value_from_json(&j)
}

pub fn value_from_json(j: &Json) -> Result<Value> {
    parse(j, "$")
}

fn obj<'a>(j: &'a Json, loc: &str) -> Result<&'a Map<String, Json>> {
    j.as_object()
        .ok_or_else(|| Error::schema(loc, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Json>, key: &str, loc: &str) -> Result<&'a Json> {
    m.get(key)
        .ok_or_else(|| Error::schema(loc, format!("missing field {key:?}")))
}

fn name(j: &Json, loc: &str) -> Result<Name> {
    let s = j
        .as_str()
        .ok_or_else(|| Error::schema(loc, "expected a name string"))?;
    s.parse::<Name>()
        .map_err(|_| Error::schema(loc, format!("bad name {s:?}")))
}

fn bit(j: &Json, loc: &str) -> Result<Bit> {
    j.as_u64()
        .and_then(|b| u8::try_from(b).ok())
        .and_then(Bit::from_u8)
        .ok_or_else(|| Error::schema(loc, "expected 0 or 1"))
}

fn parse(j: &Json, loc: &str) -> Result<Value> {
    let m = obj(j, loc)?;
    let tag = field(m, "tag", loc)?
        .as_str()
        .ok_or_else(|| Error::schema(format!("{loc}.tag"), "expected a string"))?;
    match tag {
        "unit" => Ok(Value::unit()),
        "cube" => {
            let loc_c = format!("{loc}.coords");
            let coords = field(m, "coords", loc)?
                .as_array()
                .ok_or_else(|| Error::schema(&loc_c, "expected an array"))?;
            let mut map = BTreeMap::new();
            for (k, c) in coords.iter().enumerate() {
                let here = format!("{loc_c}[{k}]");
                let cm = obj(c, &here)?;
                let key = name(field(cm, "key", &here)?, &format!("{here}.key"))?;
                let raw = field(cm, "value", &here)?;
                let v = if raw.is_string() {
                    CubeVal::Name(name(raw, &format!("{here}.value"))?)
                } else {
                    CubeVal::Bit(bit(raw, &format!("{here}.value"))?)
                };
                if map.insert(key, v).is_some() {
                    return Err(Error::schema(here, format!("duplicate key {key}")));
                }
            }
            CubePoint::new(map)
                .map(Value::cube)
                .ok_or_else(|| Error::schema(loc_c, "name coordinates must be distinct"))
        }
        "pair" => Ok(Value::pair(
            parse(field(m, "fst", loc)?, &format!("{loc}.fst"))?,
            parse(field(m, "snd", loc)?, &format!("{loc}.snd"))?,
        )),
        "abs" => Ok(Value::abs(
            name(field(m, "bound", loc)?, &format!("{loc}.bound"))?,
            parse(field(m, "body", loc)?, &format!("{loc}.body"))?,
        )),
        "base" => Ok(Value::base(parse(
            field(m, "value", loc)?,
            &format!("{loc}.value"),
        )?)),
        "upbox" | "downbox" => {
            let want = if tag == "upbox" {
                BoxKind::Up
            } else {
                BoxKind::Down
            };
            let bx = parse_box(field(m, "box", loc)?, &format!("{loc}.box"), want)?;
            Ok(Value::filler(bx))
        }
        "plus" | "minus" => {
            let want = if tag == "plus" {
                BoxKind::Up
            } else {
                BoxKind::Down
            };
            let bound = name(field(m, "bound", loc)?, &format!("{loc}.bound"))?;
            let bx = parse_box(field(m, "box", loc)?, &format!("{loc}.box"), want)?;
            if bx.dir() != bound {
                return Err(Error::schema(
                    format!("{loc}.bound"),
                    "bound name must be the direction of the box",
                ));
            }
            Ok(Value::composite(bx))
        }
        other => Err(Error::schema(
            format!("{loc}.tag"),
            format!("unknown tag {other:?}"),
        )),
    }
}

fn parse_box(j: &Json, loc: &str, want: BoxKind) -> Result<OpenBox> {
    let m = obj(j, loc)?;
    let kind = match field(m, "kind", loc)?.as_str() {
        Some("up") => BoxKind::Up,
        Some("down") => BoxKind::Down,
        _ => {
            return Err(Error::schema(
                format!("{loc}.kind"),
                "expected \"up\" or \"down\"",
            ))
        }
    };
    if kind != want {
        return Err(Error::schema(
            format!("{loc}.kind"),
            "box kind disagrees with the tag",
        ));
    }
    let dir = name(field(m, "dir", loc)?, &format!("{loc}.dir"))?;
    let loc_f = format!("{loc}.faces");
    let faces_j = field(m, "faces", loc)?
        .as_array()
        .ok_or_else(|| Error::schema(&loc_f, "expected an array"))?;
    let mut faces = BTreeMap::new();
    for (k, f) in faces_j.iter().enumerate() {
        let here = format!("{loc_f}[{k}]");
        let fm = obj(f, &here)?;
        let b = name(field(fm, "name", &here)?, &format!("{here}.name"))?;
        let i = bit(field(fm, "bit", &here)?, &format!("{here}.bit"))?;
        let t = parse(field(fm, "term", &here)?, &format!("{here}.term"))?;
        if faces.insert((b, i), t).is_some() {
            return Err(Error::schema(here, format!("duplicate face ({b}, {i})")));
        }
    }
    let base = parse(field(m, "base", loc)?, &format!("{loc}.base"))?;
    let bx = OpenBox::from_parts_unchecked(kind, dir, faces, base);
    let expected = crate::kan::box_indices(kind, &bx.names(), dir);
    if !bx.names().contains(dir) || !expected.iter().eq(bx.faces().keys()) {
        return Err(Error::schema(
            loc_f,
            "faces do not form an open box around the direction",
        ));
    }
    Ok(bx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nominal::NameSet;

    #[test]
    fn round_trips() {
        let star = Value::base(Value::unit());
        let bx = OpenBox::from_parts_unchecked(
            BoxKind::Down,
            Name(0),
            [((Name(0), Bit::One), star.clone())].into_iter().collect(),
            Value::unit(),
        );
        for v in [
            Value::unit(),
            Value::cube(CubePoint::identity(&NameSet::first(2))),
            Value::pair(Value::unit(), star.clone()),
            Value::abs(
                Name(3),
                Value::cube(
                    CubePoint::new([(Name(0), CubeVal::Name(Name(3)))].into_iter().collect())
                        .unwrap(),
                ),
            ),
            Value::filler(bx.clone()),
            Value::composite(bx),
        ] {
            let s = to_string(&v);
            assert_eq!(from_str(&s).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn reports_the_failing_location() {
        let err =
            from_str(r#"{"tag":"pair","fst":{"tag":"unit"},"snd":{"tag":"nope"}}"#).unwrap_err();
        match err {
            Error::SchemaError { location, .. } => assert_eq!(location, "$.snd.tag"),
            e => panic!("{e}"),
        }
        assert!(from_str("[").is_err());
        let missing =
            r#"{"tag":"upbox","box":{"kind":"up","dir":"a0","faces":[],"base":{"tag":"unit"}}}"#;
        assert!(matches!(from_str(missing), Err(Error::SchemaError { .. })));
    }
}
