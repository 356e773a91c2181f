//! Serde adapter for `f64` fields that may be infinite or NaN. JSON has no
//! such numbers, so they are written as the strings `"inf"`, `"-inf"`, `"NaN"`.

use serde::{de, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    match *x {
        x if x.is_finite() => s.serialize_f64(x),
        x if x.is_nan() => s.serialize_str("NaN"),
        x if x > 0.0 => s.serialize_str("inf"),
        _ => s.serialize_str("-inf"),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }
    match Repr::deserialize(d)? {
        Repr::Number(x) => Ok(x),
        Repr::Text(t) => match t.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "NaN" => Ok(f64::NAN),
            other => Err(de::Error::invalid_value(
                de::Unexpected::Str(other),
                &"a number, inf, -inf or NaN",
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Debug, Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super")] f64);

    #[test]
    fn round_trip() {
        for x in [1.5, f64::INFINITY, f64::NEG_INFINITY, 1e-300] {
            let s = serde_json::to_string(&Wrap(x)).unwrap();
            assert_eq!(serde_json::from_str::<Wrap>(&s).unwrap().0, x);
        }
        let nan = serde_json::to_string(&Wrap(f64::NAN)).unwrap();
        assert_eq!(nan, "\"NaN\"");
        assert!(serde_json::from_str::<Wrap>(&nan).unwrap().0.is_nan());
        assert!(serde_json::from_str::<Wrap>("\"big\"").is_err());
    }
}
