use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde_json::{Map, Value};

use super::{infer_reference_year, Continent, Corpus, CorpusError, CorpusFormat, Gender, Publication, Researcher};

const CSV_HEADER: [&str; 9] = [
    "researcher_id",
    "name",
    "gender",
    "continent",
    "award_years",
    "pub_id",
    "year",
    "is_field_core",
    "citation_series",
];

/// Reads and validates a corpus file. Without an explicit `reference_year`
/// the last calendar year covered by any citation series is used.
pub fn load_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
    reference_year: Option<i32>,
) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    match format {
        CorpusFormat::Jsonl => parse_jsonl(reader, reference_year),
        CorpusFormat::Csv => parse_csv(reader, reference_year),
    }
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>, format: CorpusFormat) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    match format {
        CorpusFormat::Jsonl => write_jsonl(corpus, &mut out).map_err(io_err)?,
        CorpusFormat::Csv => write_csv(corpus, &mut out).map_err(io_err)?,
    }
    out.flush().map_err(io_err)
}

fn parse_err(line: usize, field: &str, reason: impl Into<String>) -> CorpusError {
    CorpusError::Parse {
        line,
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn finish(researchers: Vec<Researcher>, lines: Vec<usize>, reference_year: Option<i32>) -> Result<Corpus, CorpusError> {
    let year = reference_year.unwrap_or_else(|| infer_reference_year(&researchers));
    Corpus::with_lines(researchers, year, &lines)
}

pub fn parse_jsonl<R: BufRead>(reader: R, reference_year: Option<i32>) -> Result<Corpus, CorpusError> {
    let mut researchers = Vec::new();
    let mut lines = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| parse_err(lineno, "record", e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(&line).map_err(|e| parse_err(lineno, "record", format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err(lineno, "record", "expected a JSON object"))?;
        researchers.push(researcher_from_json(obj, lineno)?);
        lines.push(lineno);
    }
    finish(researchers, lines, reference_year)
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, line: usize) -> Result<&'a Value, CorpusError> {
    obj.get(key).ok_or_else(|| parse_err(line, key, "missing field"))
}

fn get_str<'a>(obj: &'a Map<String, Value>, key: &str, line: usize) -> Result<&'a str, CorpusError> {
    get(obj, key, line)?
        .as_str()
        .ok_or_else(|| parse_err(line, key, "expected a string"))
}

fn as_year(v: &Value, field: &str, line: usize) -> Result<i32, CorpusError> {
    v.as_i64()
        .and_then(|y| i32::try_from(y).ok())
        .ok_or_else(|| parse_err(line, field, format!("expected an integer year, got {v}")))
}

fn researcher_from_json(obj: &Map<String, Value>, line: usize) -> Result<Researcher, CorpusError> {
    let researcher_id = get_str(obj, "researcher_id", line)?.to_string();
    let name = get_str(obj, "name", line)?.to_string();
    let gender = get_str(obj, "gender", line)?;
    let gender =
        Gender::parse(gender).ok_or_else(|| parse_err(line, "gender", format!("unknown gender '{gender}'")))?;
    let continent = get_str(obj, "continent", line)?;
    let continent = Continent::from_code(continent)
        .ok_or_else(|| parse_err(line, "continent", format!("unknown continent '{continent}'")))?;

    let award_years = match obj.get("award_years") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| as_year(v, "award_years", line))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(parse_err(line, "award_years", "expected an array")),
    };

    let pubs = get(obj, "publications", line)?
        .as_array()
        .ok_or_else(|| parse_err(line, "publications", "expected an array"))?;
    let mut publications = Vec::with_capacity(pubs.len());
    for p in pubs {
        let p = p
            .as_object()
            .ok_or_else(|| parse_err(line, "publications", "expected an array of objects"))?;
        let pub_id = get_str(p, "pub_id", line)?.to_string();
        let year = as_year(get(p, "year", line)?, "year", line)?;
        let is_field_core = get(p, "is_field_core", line)?
            .as_bool()
            .ok_or_else(|| parse_err(line, "is_field_core", "expected a boolean"))?;
        let citation_series = get(p, "citation_series", line)?
            .as_array()
            .ok_or_else(|| parse_err(line, "citation_series", "expected an array"))?
            .iter()
            .map(|c| {
                c.as_u64().ok_or_else(|| {
                    parse_err(
                        line,
                        "citation_series",
                        format!("expected a non-negative integer, got {c} in publication '{pub_id}'"),
                    )
                })
            })
            .collect::<Result<_, _>>()?;
        publications.push(Publication {
            pub_id,
            year,
            is_field_core,
            citation_series,
        });
    }

    Ok(Researcher {
        researcher_id,
        name,
        gender,
        continent,
        award_years,
        publications,
    })
}

fn split_ints<T: std::str::FromStr>(cell: &str, field: &str, line: usize) -> Result<Vec<T>, CorpusError> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(Vec::new());
    }
    cell.split(';')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| parse_err(line, field, format!("'{s}' is not a valid non-negative integer")))
        })
        .collect()
}

fn parse_bool(cell: &str, line: usize) -> Result<bool, CorpusError> {
    match cell.trim().to_ascii_lowercase().as_str() {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        other => Err(parse_err(line, "is_field_core", format!("'{other}' is not a boolean"))),
    }
}

/// Long-format CSV: one row per publication with researcher columns repeated.
/// A row with empty publication cells stands for a researcher without
/// publications.
pub fn parse_csv<R: Read>(reader: R, reference_year: Option<i32>) -> Result<Corpus, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, "header", e.to_string()))?
        .clone();
    let mut col = HashMap::new();
    for name in CSV_HEADER {
        let idx = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| parse_err(1, name, "missing column"))?;
        col.insert(name, idx);
    }

    let mut researchers: Vec<Researcher> = Vec::new();
    let mut lines = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, "record", e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let cell = |name: &str| record.get(col[name]).unwrap_or("").trim();

        let researcher_id = cell("researcher_id").to_string();
        let gender = Gender::parse(cell("gender"))
            .ok_or_else(|| parse_err(line, "gender", format!("unknown gender '{}'", cell("gender"))))?;
        let continent = Continent::from_code(cell("continent"))
            .ok_or_else(|| parse_err(line, "continent", format!("unknown continent '{}'", cell("continent"))))?;
        let award_years: Vec<i32> = split_ints(cell("award_years"), "award_years", line)?;
        let header = Researcher {
            researcher_id: researcher_id.clone(),
            name: record.get(col["name"]).unwrap_or("").to_string(),
            gender,
            continent,
            award_years,
            publications: Vec::new(),
        };

        let slot = match index.get(&researcher_id) {
            Some(&i) => {
                let existing = &researchers[i];
                if existing.name != header.name
                    || existing.gender != header.gender
                    || existing.continent != header.continent
                    || existing.award_years != header.award_years
                {
                    return Err(CorpusError::Invalid {
                        line,
                        field: "researcher_id".into(),
                        reason: format!("researcher '{researcher_id}' repeats with conflicting researcher fields"),
                    });
                }
                i
            }
            None => {
                index.insert(researcher_id, researchers.len());
                researchers.push(header);
                lines.push(line);
                researchers.len() - 1
            }
        };

        let pub_id = cell("pub_id");
        if pub_id.is_empty() && cell("year").is_empty() && cell("citation_series").is_empty() {
            continue;
        }
        let year = cell("year")
            .parse::<i32>()
            .map_err(|_| parse_err(line, "year", format!("'{}' is not an integer year", cell("year"))))?;
        let publication = Publication {
            pub_id: pub_id.to_string(),
            year,
            is_field_core: parse_bool(cell("is_field_core"), line)?,
            citation_series: split_ints(cell("citation_series"), "citation_series", line)?,
        };
        researchers[slot].publications.push(publication);
    }
    finish(researchers, lines, reference_year)
}

pub fn write_jsonl<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for r in corpus.researchers() {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

pub fn write_csv<W: Write>(corpus: &Corpus, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in corpus.researchers() {
        let awards = join(&r.award_years);
        let head = [
            r.researcher_id.as_str(),
            r.name.as_str(),
            r.gender.as_str(),
            r.continent.code(),
            awards.as_str(),
        ];
        if r.publications.is_empty() {
            w.write_record(head.iter().copied().chain(["", "", "", ""]))?;
        }
        for p in &r.publications {
            let year = p.year.to_string();
            let series = join(&p.citation_series);
            w.write_record(head.iter().copied().chain([
                p.pub_id.as_str(),
                year.as_str(),
                if p.is_field_core { "true" } else { "false" },
                series.as_str(),
            ]))?;
        }
    }
    w.flush()
}
