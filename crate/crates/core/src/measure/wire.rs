//! JSON descriptions of carriers, events and algebras.
//!
//! ```json
//! {"carrier":"interval","intervals":[["0/1","1/2"]]}
//! {"carrier":"cylinder","probs":["1/2","1/2"],"window":[0,1],"words":["01","10"]}
//! {"carrier":"rect","left":{"kind":"interval"},"right":{"kind":"interval"},
//!  "rectangles":[[{"carrier":"interval",...},{"carrier":"interval",...}]]}
//! ```
//!
//! Cylinder events with many paths are written as a node table instead of words:
//! `"dag":{"root":0,"nodes":[[coord,[kid,...]],...]}` where a kid is `true`, `false`
//! or the index of an earlier node.

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Carrier, CylinderEvent, Event, FiniteAlgebra, IntervalEvent, RectEvent};
use crate::error::{Error, Result};
use crate::rational::Rational;

const MAX_WORDS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CarrierDesc {
    Interval,
    Cylinder { probs: Vec<Rational> },
    Rect { left: Box<CarrierDesc>, right: Box<CarrierDesc> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Kid {
    Terminal(bool),
    Node(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dag {
    pub root: Kid,
    pub nodes: Vec<(i64, Vec<Kid>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "carrier", rename_all = "lowercase", deny_unknown_fields)]
pub enum EventDesc {
    Interval {
        intervals: Vec<(Rational, Rational)>,
    },
    Cylinder {
        probs: Vec<Rational>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<(i64, i64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        words: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dag: Option<Dag>,
    },
    Rect {
        left: CarrierDesc,
        right: CarrierDesc,
        rectangles: Vec<(EventDesc, EventDesc)>,
    },
}

impl CarrierDesc {
    pub fn to_carrier(&self) -> Result<Carrier> {
        match self {
            CarrierDesc::Interval => Ok(Carrier::Interval),
            CarrierDesc::Cylinder { probs } => Carrier::bernoulli(probs.clone()),
            CarrierDesc::Rect { left, right } => {
                Carrier::product(left.to_carrier()?, right.to_carrier()?)
            }
        }
    }

    pub fn from_carrier(c: &Carrier) -> Self {
        match c {
            Carrier::Interval => CarrierDesc::Interval,
            Carrier::Cylinder(p) => CarrierDesc::Cylinder { probs: p.to_vec() },
            Carrier::Rect(l, r) => CarrierDesc::Rect {
                left: Box::new(Self::from_carrier(l)),
                right: Box::new(Self::from_carrier(r)),
            },
        }
    }
}

fn kid_in(k: Kid) -> std::result::Result<u32, bool> {
    match k {
        Kid::Terminal(b) => Err(b),
        Kid::Node(i) => Ok(i),
    }
}

fn kid_out(k: std::result::Result<u32, bool>) -> Kid {
    match k {
        Err(b) => Kid::Terminal(b),
        Ok(i) => Kid::Node(i),
    }
}

impl EventDesc {
    pub fn to_event(&self) -> Result<Event> {
        match self {
            EventDesc::Interval { intervals } => {
                IntervalEvent::normalize(intervals.iter().cloned()).map(Event::Interval)
            }
            EventDesc::Cylinder {
                probs,
                window,
                words,
                dag,
            } => {
                let probs: Arc<[Rational]> = Arc::from(probs.clone());
                match (words, dag) {
                    (Some(words), None) => {
                        CylinderEvent::from_words(probs, *window, words).map(Event::Cylinder)
                    }
                    (None, Some(dag)) if window.is_none() => {
                        let table: Vec<_> = dag
                            .nodes
                            .iter()
                            .map(|(c, kids)| (*c, kids.iter().map(|&k| kid_in(k)).collect()))
                            .collect();
                        CylinderEvent::from_node_table(probs, &table, kid_in(dag.root))
                            .map(Event::Cylinder)
                    }
                    _ => Err(Error::Parse(
                        "cylinder event needs either window and words, or dag".into(),
                    )),
                }
            }
            EventDesc::Rect {
                left,
                right,
                rectangles,
            } => {
                let (lc, rc) = (left.to_carrier()?, right.to_carrier()?);
                let mut raw = Vec::with_capacity(rectangles.len());
                for (l, r) in rectangles {
                    raw.push((l.to_event()?, r.to_event()?));
                }
                RectEvent::normalize(lc, rc, raw).map(Event::Rect)
            }
        }
    }

    pub fn from_event(e: &Event) -> Self {
        match e {
            Event::Interval(iv) => EventDesc::Interval {
                intervals: iv.intervals().to_vec(),
            },
            Event::Cylinder(c) => {
                let probs = c.probs().to_vec();
                match c.patterns(MAX_WORDS) {
                    Some(words) => EventDesc::Cylinder {
                        probs,
                        window: c.window(),
                        words: Some(words),
                        dag: None,
                    },
                    None => {
                        let (table, root) = c.node_table();
                        EventDesc::Cylinder {
                            probs,
                            window: None,
                            words: None,
                            dag: Some(Dag {
                                root: kid_out(root),
                                nodes: table
                                    .into_iter()
                                    .map(|(c, kids)| (c, kids.into_iter().map(kid_out).collect()))
                                    .collect(),
                            }),
                        }
                    }
                }
            }
            Event::Rect(r) => EventDesc::Rect {
                left: CarrierDesc::from_carrier(r.left()),
                right: CarrierDesc::from_carrier(r.right()),
                rectangles: r
                    .rectangles()
                    .iter()
                    .map(|(l, rr)| (Self::from_event(l), Self::from_event(rr)))
                    .collect(),
            },
        }
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EventDesc::from_event(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        EventDesc::deserialize(d)?
            .to_event()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for Carrier {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CarrierDesc::from_carrier(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Carrier {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CarrierDesc::deserialize(d)?
            .to_carrier()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDesc {
    atoms: Vec<Event>,
}

impl Serialize for FiniteAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraDesc {
            atoms: self.atoms().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = AlgebraDesc::deserialize(d)?;
        FiniteAlgebra::new(desc.atoms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn interval_json() {
        let e: Event = serde_json::from_str(
            r#"{"carrier":"interval","intervals":[["1/2","1"],["0/1","1/4"]]}"#,
        )
        .unwrap();
        assert_eq!(e.measure(), q!(3, 4));
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(
            text,
            r#"{"carrier":"interval","intervals":[["0/1","1/4"],["1/2","1/1"]]}"#
        );
    }

    #[test]
    fn cylinder_json() {
        let e: Event = serde_json::from_str(
            r#"{"carrier":"cylinder","probs":["1/2","1/2"],"window":[0,1],"words":["01","10"]}"#,
        )
        .unwrap();
        assert_eq!(e.measure(), q!(1, 2));
        let back: Event = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn unknown_fields_rejected() {
        let r: std::result::Result<Event, _> =
            serde_json::from_str(r#"{"carrier":"interval","intervals":[],"extra":1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn rect_json_round_trip() {
        let l = Event::interval(q!(0), q!(1, 2)).unwrap();
        let r = Event::interval(q!(1, 3), q!(1)).unwrap();
        let e = Event::rectangle(l, r).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: Event = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }
}
