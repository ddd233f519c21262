use super::{AxCircuit, Characterization, Family, OpClass};
use crate::error::{Error, Result};
use crate::library::pmf::check_ports;
use crate::netlist::GateNetlist;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

const MANIFEST: &str = "manifest.csv";
const WMED_TABLE: &str = "wmed.csv";
const NETLIST_DIR: &str = "netlists";

/// An indexed collection of circuits with unique ids.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    circuits: Vec<AxCircuit>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct ManifestRow {
    id: String,
    op_class: String,
    family: String,
    params: String,
    area: f64,
    delay: f64,
    power: f64,
    med: f64,
    wce: f64,
    err_variance: f64,
}

#[derive(Serialize, Deserialize)]
struct WmedRow {
    id: String,
    app: String,
    wmed: f64,
}

impl Catalog {
    pub fn new(circuits: Vec<AxCircuit>) -> Result<Catalog> {
        let mut index = HashMap::with_capacity(circuits.len());
        for (i, c) in circuits.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate circuit id `{}`", c.id)));
            }
        }
        Ok(Catalog { circuits, index })
    }

    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }

    pub fn circuits(&self) -> &[AxCircuit] {
        &self.circuits
    }

    pub fn get(&self, index: usize) -> &AxCircuit {
        &self.circuits[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownCircuit(id.to_string()))
    }

    /// Indices of all circuits of `class`, in catalog order.
    pub fn of_class(&self, class: OpClass) -> Vec<usize> {
        (0..self.circuits.len())
            .filter(|&i| self.circuits[i].class == class)
            .collect()
    }

    /// The circuit generated with neutral parameters for `class`.
    pub fn exact_for(&self, class: OpClass) -> Option<usize> {
        (0..self.circuits.len()).find(|&i| {
            let c = &self.circuits[i];
            c.class == class && c.family.is_neutral()
        })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join(NETLIST_DIR))?;
        let mut w = csv::Writer::from_path(dir.join(MANIFEST))?;
        let mut ww = csv::Writer::from_path(dir.join(WMED_TABLE))?;
        for c in &self.circuits {
            let ch = &c.characterization;
            w.serialize(ManifestRow {
                id: c.id.clone(),
                op_class: c.class.to_string(),
                family: c.family.name().to_string(),
                params: c.family.params_string(),
                area: ch.area,
                delay: ch.delay,
                power: ch.power,
                med: ch.med,
                wce: ch.wce,
                err_variance: ch.err_variance,
            })?;
            for (app, &wmed) in &ch.wmed {
                ww.serialize(WmedRow {
                    id: c.id.clone(),
                    app: app.clone(),
                    wmed,
                })?;
            }
            fs::write(
                dir.join(NETLIST_DIR).join(format!("{}.net", c.id)),
                c.netlist.to_text(),
            )?;
        }
        w.flush()?;
        ww.flush()?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Catalog> {
        let manifest = dir.join(MANIFEST);
        let mut r = csv::Reader::from_path(&manifest)
            .map_err(|e| Error::Format(format!("{}: {e}", manifest.display())))?;
        let mut wmeds: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        let wpath = dir.join(WMED_TABLE);
        if wpath.exists() {
            let mut wr = csv::Reader::from_path(&wpath)?;
            for row in wr.deserialize::<WmedRow>() {
                let row = row?;
                wmeds.entry(row.id).or_default().insert(row.app, row.wmed);
            }
        }
        let mut circuits = Vec::new();
        for row in r.deserialize::<ManifestRow>() {
            let row = row?;
            let class: OpClass = row.op_class.parse()?;
            let family = Family::parse(&row.family, &row.params)?;
            let path = dir.join(NETLIST_DIR).join(format!("{}.net", row.id));
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            let netlist = GateNetlist::from_text(&text)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            check_ports(&netlist, class)?;
            circuits.push(AxCircuit {
                characterization: Characterization {
                    area: row.area,
                    delay: row.delay,
                    power: row.power,
                    med: row.med,
                    wce: row.wce,
                    err_variance: row.err_variance,
                    wmed: wmeds.remove(&row.id).unwrap_or_default(),
                },
                id: row.id,
                class,
                family,
                netlist,
            });
        }
        Catalog::new(circuits)
    }
}
