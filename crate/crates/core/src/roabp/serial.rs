//! JSON form: field tag, order by name, and each layer as a dense matrix of
//! label strings. A program over the empty order stores its constant in
//! `value`.

use serde::{Deserialize, Serialize};

use super::layer::Layer;
use super::program::Roabp;
use super::unipoly::UniPoly;
use crate::algebra::{parse_poly, Field, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoabpFile {
    pub field: String,
    pub order: Vec<String>,
    pub layers: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Roabp {
    pub fn to_file(&self) -> RoabpFile {
        let layers = self
            .layers
            .iter()
            .zip(&self.order)
            .map(|(l, v)| {
                (0..l.rows)
                    .map(|r| {
                        (0..l.cols)
                            .map(|c| l.get(r, c).to_sparse(&self.ring, *v).to_string())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        RoabpFile {
            field: self.field().tag(),
            order: self.ring.names(&self.order),
            layers,
            value: self.order.is_empty().then(|| self.value.to_string()),
        }
    }

    /// Reads a program into `ring`, registering unseen variable names.
    pub fn from_file(ring: &PolyRing, f: &RoabpFile) -> Result<Roabp> {
        let field = Field::parse_tag(&f.field)?;
        if field != ring.field() {
            return Err(Error::FieldMismatch(f.field.clone(), ring.field().tag()));
        }
        let order = ring.vars(&f.order);
        if order.is_empty() {
            let v = match &f.value {
                Some(s) => field.parse_element(s)?,
                None => field.one(),
            };
            return Ok(Roabp::constant(ring, &[], v));
        }
        let mut layers = Vec::with_capacity(order.len());
        for (dense, v) in f.layers.iter().zip(&order) {
            let rows = dense.len();
            let cols = dense.first().map(|r| r.len()).unwrap_or(0);
            let mut l = Layer::zeros(rows, cols);
            for (r, row) in dense.iter().enumerate() {
                if row.len() != cols {
                    return Err(Error::MalformedProgram("ragged layer matrix".into()));
                }
                for (c, s) in row.iter().enumerate() {
                    let p = parse_poly(ring, s)?;
                    l.set(r, c, UniPoly::from_sparse(&p, *v)?);
                }
            }
            layers.push(l);
        }
        Roabp::from_layers(ring, order, layers)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(ring: &PolyRing, text: &str) -> Result<Roabp> {
        Roabp::from_file(ring, &serde_json::from_str(text)?)
    }
}
