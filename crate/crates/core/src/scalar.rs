//! Lenient serde for complex scalars: a JSON number, a `[re, im]` pair, or a
//! string such as `"0.3-0.2i"`. Always serialized as `[re, im]`.

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::Serializer;
use std::fmt;

use crate::expr::Expr;
use crate::C64;

pub mod flex {
    use super::*;

    pub fn serialize<S: Serializer>(value: &C64, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&value.re)?;
        tup.serialize_element(&value.im)?;
        tup.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<C64, D::Error> {
        deserializer.deserialize_any(FlexVisitor)
    }
}

/// Same as [`flex`] for optional fields.
pub mod flex_opt {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<C64>, serializer: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => flex::serialize(v, serializer),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<C64>, D::Error> {
        struct OptVisitor;
        impl<'de> Visitor<'de> for OptVisitor {
            type Value = Option<C64>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an optional complex number")
            }
            fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(None)
            }
            fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(None)
            }
            fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
                flex::deserialize(d).map(Some)
            }
        }
        deserializer.deserialize_option(OptVisitor)
    }
}

struct FlexVisitor;

impl<'de> Visitor<'de> for FlexVisitor {
    type Value = C64;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number, a [re, im] pair, or a string like \"0.3+0.4i\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<C64, E> {
        Ok(C64::new(v, 0.0))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<C64, E> {
        Ok(C64::new(v as f64, 0.0))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<C64, E> {
        Ok(C64::new(v as f64, 0.0))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<C64, E> {
        Expr::parse_constant(v).map_err(|e| E::custom(format!("{v:?}: {e}")))
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<C64, A::Error> {
        let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<f64>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(C64::new(re, im))
    }
}
