//! Grouped CSV datasets.
//!
//! Two layouts are read: `group,value`, and `group,baseline,completion`
//! where the analysed value is the relative change
//! `(completion − baseline)/baseline`. An empty field or `NA` marks a
//! missing measurement.

use std::io::{Read, Write};

use rankguard_core::{relative_change, Sample};

use crate::error::{AppError, InputError};

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

impl Group {
    pub fn n_missing(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn to_sample(&self) -> Result<Sample, InputError> {
        let observed: Vec<f64> = self.values.iter().flatten().copied().collect();
        if observed.is_empty() {
            return Err(InputError::new(format!("group {}", self.name), "every value is missing"));
        }
        Sample::new(observed, self.n_missing())
            .map_err(|e| InputError::new(format!("group {}", self.name), e.to_string()))
    }
}

/// Groups in order of first appearance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetTable {
    pub groups: Vec<Group>,
}

pub fn parse_value(field: &str) -> Result<Option<f64>, String> {
    let t = field.trim();
    if t.is_empty() || t == "NA" {
        return Ok(None);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(format!("cannot parse {t:?} as a number or NA")),
    }
}

impl DatasetTable {
    pub fn group(&self, name: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn push(&mut self, name: &str, value: Option<f64>) {
        match self.groups.iter_mut().find(|g| g.name == name) {
            Some(g) => g.values.push(value),
            None => self.groups.push(Group { name: name.to_string(), values: vec![value] }),
        }
    }

    pub fn from_reader<R: Read>(reader: R, path: &str) -> Result<Self, AppError> {
        let csv_err = |source| AppError::Csv { path: path.to_string(), source };
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
        let paired = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["group", "value"] => false,
            ["group", "baseline", "completion"] => true,
            _ => {
                return Err(InputError::new(
                    "header",
                    format!(
                        "{path}: expected `group,value` or `group,baseline,completion`, got `{}`",
                        header.join(",")
                    ),
                )
                .into())
            }
        };
        let mut table = DatasetTable::default();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(csv_err)?;
            let line = i + 2;
            let field = |name: &str, msg: String| InputError::new(format!("{path} line {line} {name}"), msg);
            let group = record.get(0).unwrap_or("");
            if group.is_empty() {
                return Err(field("group", "empty group label".into()).into());
            }
            let value = if paired {
                let baseline = parse_value(&record[1]).map_err(|m| field("baseline", m))?;
                let completion = parse_value(&record[2]).map_err(|m| field("completion", m))?;
                let baseline = baseline.ok_or_else(|| field("baseline", "baseline is missing".into()))?;
                relative_change(baseline, completion).map_err(|e| field("baseline", e.to_string()))?
            } else {
                parse_value(&record[1]).map_err(|m| field("value", m))?
            };
            table.push(group, value);
        }
        Ok(table)
    }

    pub fn from_path(path: &str) -> Result<Self, AppError> {
        let file =
            std::fs::File::open(path).map_err(|source| AppError::Io { path: path.to_string(), source })?;
        DatasetTable::from_reader(file, path)
    }

    /// Writes the `group,value` layout.
    pub fn write<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["group", "value"])?;
        for g in &self.groups {
            for v in &g.values {
                let field = v.map_or_else(|| "NA".to_string(), |v| v.to_string());
                w.write_record([g.name.as_str(), field.as_str()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_both_layouts() {
        let t = DatasetTable::from_reader("group,value\nb,1.5\na,NA\nb,\na,2\n".as_bytes(), "t").unwrap();
        assert_eq!(t.groups.len(), 2);
        assert_eq!(t.groups[0].name, "b");
        assert_eq!(t.groups[0].values, vec![Some(1.5), None]);
        assert_eq!(t.group("a").unwrap().n_missing(), 1);

        let p = DatasetTable::from_reader(
            "group,baseline,completion\nc,100,50\nc,10,NA\nd,4,6\n".as_bytes(),
            "p",
        )
        .unwrap();
        assert_eq!(p.group("c").unwrap().values, vec![Some(-0.5), None]);
        assert_eq!(p.group("d").unwrap().values, vec![Some(0.5)]);
    }

    #[test]
    fn errors_name_the_field() {
        let e = DatasetTable::from_reader("group,value\na,x\n".as_bytes(), "f.csv").unwrap_err();
        assert!(e.to_string().contains("line 2 value"), "{e}");
        let e =
            DatasetTable::from_reader("group,baseline,completion\na,0,1\n".as_bytes(), "f.csv").unwrap_err();
        assert!(e.to_string().contains("baseline"), "{e}");
        let e = DatasetTable::from_reader("grp,v\n".as_bytes(), "f.csv").unwrap_err();
        assert!(e.to_string().contains("header"), "{e}");
        let e = DatasetTable::from_reader("group,value\n,1\n".as_bytes(), "f.csv").unwrap_err();
        assert!(e.to_string().contains("group"), "{e}");
        let t = DatasetTable::from_reader("group,value\na,NA\n".as_bytes(), "f.csv").unwrap();
        assert!(t.groups[0].to_sample().unwrap_err().field.contains('a'));
    }

    #[test]
    fn write_read_round_trip() {
        let mut t = DatasetTable::default();
        let vals = [Some(0.1 + 0.2), None, Some(-1.0 / 3.0), Some(1e-300), Some(12345.678901234567)];
        for (i, v) in vals.iter().enumerate() {
            t.push(if i % 2 == 0 { "ctl" } else { "trt" }, *v);
        }
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        let back = DatasetTable::from_reader(buf.as_slice(), "mem").unwrap();
        assert_eq!(back, t);
    }
}
