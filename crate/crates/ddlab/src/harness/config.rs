//! Flat sectioned key=value configuration for custom BER runs.
//!
//! Sections and keys (all case-sensitive; unknown keys are hard errors):
//!
//! ```text
//! [modem]
//! m = 16                     # vector size
//! n = 64                     # subcarriers
//! cp_len = 16                # cyclic prefix, multiple of m
//! constellation = qpsk       # bpsk | qpsk | qam16
//!
//! [channel]
//! kind = taps                # taps | rayleigh_block
//! delays = 0,1,2,3           # taps: strictly increasing integers
//! gains = 0.7,0.5,0.3+0.1i   # taps: complex a+bi or plain reals
//! doppler = linear:0.0008    # none | constant:<w0> | linear:<slope> | pertap:<w,...>
//! normalize = true           # scale gains to unit total power (default true)
//! scalars = 2                # rayleigh_block: i.i.d. scalars per block
//!
//! [coding]
//! scheme = none              # none | ssd | precode | alamouti
//! ssd_angle = 0.5536         # ssd: rotation angle, radians
//! ssd_dim = 2                # ssd: block size d
//! ssd_stride = 32            # ssd: interleaving stride (default n/d)
//!
//! [sim]
//! snr_db = 0:5:20            # start:step:stop, or comma list
//! max_frames = 10000
//! target_bit_errors = 200    # >= 100 for interval validity
//! master_seed = 42
//! equalizer = mmse           # zf | mmse | ml (scheme = none only)
//! ```
//!
//! Parsing is line-precise: every diagnostic carries the offending line.
//! The canonical serialization (sorted `section.key=value` lines of parsed
//! values) backs the run-manifest digest, so semantically identical files
//! digest identically regardless of ordering, whitespace, or comments.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Doppler profile assignment, as written in the config.
#[derive(Debug, Clone, PartialEq)]
pub enum DopplerSpec {
    None,
    Constant(f64),
    Linear(f64),
    PerTap(Vec<f64>),
}

/// Channel description.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Taps {
        delays: Vec<usize>,
        gains: Vec<Complex64>,
        doppler: DopplerSpec,
        normalize: bool,
    },
    RayleighBlock { scalars: usize },
}

/// Coding layer on top of the modem.
#[derive(Debug, Clone, PartialEq)]
pub enum CodingSpec {
    None,
    Ssd { angle: f64, dim: usize, stride: Option<usize> },
    Precode,
    Alamouti,
}

/// Per-bin equalizer for uncoded runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualizerSpec {
    Zf,
    Mmse,
    Ml,
}

/// A fully parsed and validated custom-run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: usize,
    pub cp_len: usize,
    pub constellation: String,
    pub channel: ChannelSpec,
    pub coding: CodingSpec,
    pub snr_db: Vec<f64>,
    pub max_frames: u64,
    pub target_bit_errors: u64,
    pub master_seed: u64,
    pub equalizer: EqualizerSpec,
}

struct RawItem {
    line: usize,
    value: String,
}

fn cfg_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

/// Parse a complex number written as `a`, `a+bi`, `a-bi`, or `bi`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    if let Ok(re) = t.parse::<f64>() {
        return Some(Complex64::new(re, 0.0));
    }
    let t = t.strip_suffix('i')?;
    // Split at the last +/- that is not an exponent sign or leading sign.
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => {
            let re: f64 = t[..i].parse().ok()?;
            let imag_str = &t[i..];
            let im: f64 = if imag_str == "+" {
                1.0
            } else if imag_str == "-" {
                -1.0
            } else {
                imag_str.parse().ok()?
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im: f64 = if t == "" { 1.0 } else { t.parse().ok()? };
            Some(Complex64::new(0.0, im))
        }
    }
}

/// Parse an SNR grid: either `start:step:stop` (inclusive) or a comma list.
pub fn parse_snr_list(s: &str) -> Option<Vec<f64>> {
    let t = s.trim();
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return None;
        }
        let start: f64 = parts[0].trim().parse().ok()?;
        let step: f64 = parts[1].trim().parse().ok()?;
        let stop: f64 = parts[2].trim().parse().ok()?;
        if step <= 0.0 || stop < start {
            return None;
        }
        let mut out = Vec::new();
        let mut v = start;
        let mut k = 0u32;
        while v <= stop + 1e-9 {
            out.push(v);
            k += 1;
            v = start + step * k as f64;
        }
        Some(out)
    } else {
        let vals: Option<Vec<f64>> = t
            .split(',')
            .map(|p| p.trim().parse::<f64>().ok())
            .collect();
        let vals = vals?;
        if vals.is_empty() {
            None
        } else {
            Some(vals)
        }
    }
}

/// Parse configuration text. `path` is used only for diagnostics.
pub fn parse_config(path: &str, text: &str) -> Result<ExperimentConfig> {
    const SECTIONS: [&str; 4] = ["modem", "channel", "coding", "sim"];
    const KEYS: [(&str, &[&str]); 4] = [
        ("modem", &["m", "n", "cp_len", "constellation"]),
        ("channel", &["kind", "delays", "gains", "doppler", "normalize", "scalars"]),
        ("coding", &["scheme", "ssd_angle", "ssd_dim", "ssd_stride"]),
        (
            "sim",
            &["snr_db", "max_frames", "target_bit_errors", "master_seed", "equalizer"],
        ),
    ];

    let mut items: BTreeMap<(String, String), RawItem> = BTreeMap::new();
    let mut section: Option<String> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(cfg_err(path, line_no, format!("unknown section [{name}]")));
            }
            section = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(cfg_err(path, line_no, format!("expected key = value, got '{line}'")));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let Some(sec) = section.as_ref() else {
            return Err(cfg_err(path, line_no, format!("key '{key}' outside any section")));
        };
        let allowed = KEYS
            .iter()
            .find(|(s, _)| s == sec)
            .map(|(_, ks)| *ks)
            .unwrap_or(&[]);
        if !allowed.contains(&key.as_str()) {
            return Err(cfg_err(
                path,
                line_no,
                format!("unknown key '{key}' in [{sec}]"),
            ));
        }
        if items
            .insert((sec.clone(), key.clone()), RawItem { line: line_no, value })
            .is_some()
        {
            return Err(cfg_err(path, line_no, format!("duplicate key '{key}' in [{sec}]")));
        }
    }

    let get = |sec: &str, key: &str| items.get(&(sec.to_string(), key.to_string()));
    let require = |sec: &str, key: &str| -> Result<&RawItem> {
        get(sec, key).ok_or_else(|| cfg_err(path, 0, format!("missing required key '{key}' in [{sec}]")))
    };
    fn parse_num<T: std::str::FromStr>(path: &str, item: &RawItem, what: &str) -> Result<T> {
        item.value
            .parse::<T>()
            .map_err(|_| cfg_err(path, item.line, format!("invalid {what}: '{}'", item.value)))
    }

    // [modem]
    let m: usize = parse_num(path, require("modem", "m")?, "integer m")?;
    let n: usize = parse_num(path, require("modem", "n")?, "integer n")?;
    let cp_len: usize = parse_num(path, require("modem", "cp_len")?, "integer cp_len")?;
    let cons_item = require("modem", "constellation")?;
    let constellation = cons_item.value.clone();
    if !["bpsk", "qpsk", "qam16"].contains(&constellation.as_str()) {
        return Err(cfg_err(
            path,
            cons_item.line,
            format!("unknown constellation '{constellation}'"),
        ));
    }
    if m == 0 || n == 0 {
        return Err(cfg_err(path, 0, "m and n must be >= 1"));
    }
    if cp_len % m != 0 {
        return Err(cfg_err(
            path,
            require("modem", "cp_len")?.line,
            format!("cp_len {cp_len} must be a multiple of m {m}"),
        ));
    }

    // [channel]
    let kind_item = require("channel", "kind")?;
    let channel = match kind_item.value.as_str() {
        "taps" => {
            let delays_item = require("channel", "delays")?;
            let delays: Vec<usize> = delays_item
                .value
                .split(',')
                .map(|p| {
                    p.trim().parse::<usize>().map_err(|_| {
                        cfg_err(path, delays_item.line, format!("invalid delay '{}'", p.trim()))
                    })
                })
                .collect::<Result<_>>()?;
            if delays.windows(2).any(|w| w[1] <= w[0]) || delays.is_empty() {
                return Err(cfg_err(
                    path,
                    delays_item.line,
                    "delays must be a non-empty strictly increasing list",
                ));
            }
            let gains_item = require("channel", "gains")?;
            let gains: Vec<Complex64> = gains_item
                .value
                .split(',')
                .map(|p| {
                    parse_complex(p).ok_or_else(|| {
                        cfg_err(path, gains_item.line, format!("invalid gain '{}'", p.trim()))
                    })
                })
                .collect::<Result<_>>()?;
            if gains.len() != delays.len() {
                return Err(cfg_err(
                    path,
                    gains_item.line,
                    format!("{} gains for {} delays", gains.len(), delays.len()),
                ));
            }
            let doppler = match get("channel", "doppler") {
                None => DopplerSpec::None,
                Some(item) => {
                    let v = item.value.as_str();
                    if v == "none" {
                        DopplerSpec::None
                    } else if let Some(rest) = v.strip_prefix("constant:") {
                        DopplerSpec::Constant(rest.trim().parse().map_err(|_| {
                            cfg_err(path, item.line, format!("invalid doppler '{v}'"))
                        })?)
                    } else if let Some(rest) = v.strip_prefix("linear:") {
                        DopplerSpec::Linear(rest.trim().parse().map_err(|_| {
                            cfg_err(path, item.line, format!("invalid doppler '{v}'"))
                        })?)
                    } else if let Some(rest) = v.strip_prefix("pertap:") {
                        let vals: Vec<f64> = rest
                            .split(',')
                            .map(|p| {
                                p.trim().parse::<f64>().map_err(|_| {
                                    cfg_err(path, item.line, format!("invalid doppler value '{p}'"))
                                })
                            })
                            .collect::<Result<_>>()?;
                        if vals.len() != delays.len() {
                            return Err(cfg_err(
                                path,
                                item.line,
                                format!("{} doppler values for {} taps", vals.len(), delays.len()),
                            ));
                        }
                        DopplerSpec::PerTap(vals)
                    } else {
                        return Err(cfg_err(
                            path,
                            item.line,
                            format!("invalid doppler '{v}' (none | constant:<w> | linear:<s> | pertap:<..>)"),
                        ));
                    }
                }
            };
            let normalize = match get("channel", "normalize") {
                None => true,
                Some(item) => match item.value.as_str() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(cfg_err(
                            path,
                            item.line,
                            format!("invalid normalize '{other}' (true|false)"),
                        ))
                    }
                },
            };
            if let Some(item) = get("channel", "scalars") {
                return Err(cfg_err(path, item.line, "'scalars' applies only to rayleigh_block"));
            }
            let order = *delays.last().unwrap();
            if order > cp_len {
                return Err(cfg_err(
                    path,
                    delays_item.line,
                    format!("channel order {order} exceeds cp_len {cp_len}"),
                ));
            }
            ChannelSpec::Taps { delays, gains, doppler, normalize }
        }
        "rayleigh_block" => {
            let scalars: usize = match get("channel", "scalars") {
                Some(item) => parse_num(path, item, "integer scalars")?,
                None => 1,
            };
            for key in ["delays", "gains", "doppler", "normalize"] {
                if let Some(item) = get("channel", key) {
                    return Err(cfg_err(
                        path,
                        item.line,
                        format!("'{key}' applies only to kind = taps"),
                    ));
                }
            }
            ChannelSpec::RayleighBlock { scalars }
        }
        other => {
            return Err(cfg_err(
                path,
                kind_item.line,
                format!("unknown channel kind '{other}' (taps | rayleigh_block)"),
            ))
        }
    };

    // [coding]
    let coding = match get("coding", "scheme").map(|i| i.value.as_str()) {
        None | Some("none") => {
            for key in ["ssd_angle", "ssd_dim", "ssd_stride"] {
                if let Some(item) = get("coding", key) {
                    return Err(cfg_err(path, item.line, format!("'{key}' applies only to scheme = ssd")));
                }
            }
            CodingSpec::None
        }
        Some("ssd") => {
            let angle = match get("coding", "ssd_angle") {
                Some(item) => parse_num(path, item, "ssd_angle")?,
                None => 0.5536,
            };
            let dim: usize = match get("coding", "ssd_dim") {
                Some(item) => parse_num(path, item, "ssd_dim")?,
                None => 2,
            };
            let stride: Option<usize> = match get("coding", "ssd_stride") {
                Some(item) => Some(parse_num(path, item, "ssd_stride")?),
                None => None,
            };
            if dim != 2 {
                return Err(cfg_err(
                    path,
                    get("coding", "ssd_dim").map(|i| i.line).unwrap_or(0),
                    "only ssd_dim = 2 ships a rotation family",
                ));
            }
            CodingSpec::Ssd { angle, dim, stride }
        }
        Some("precode") => CodingSpec::Precode,
        Some("alamouti") => CodingSpec::Alamouti,
        Some(other) => {
            return Err(cfg_err(
                path,
                get("coding", "scheme").map(|i| i.line).unwrap_or(0),
                format!("unknown coding scheme '{other}'"),
            ))
        }
    };
    // Cross-section consistency.
    match (&coding, &channel) {
        (CodingSpec::Alamouti, ChannelSpec::RayleighBlock { scalars }) if *scalars == 2 => {}
        (CodingSpec::Alamouti, _) => {
            return Err(cfg_err(
                path,
                0,
                "scheme = alamouti requires kind = rayleigh_block with scalars = 2",
            ))
        }
        (CodingSpec::Ssd { .. } | CodingSpec::Precode, _) if m != 1 => {
            return Err(cfg_err(path, 0, "ssd/precode schemes require m = 1"))
        }
        _ => {}
    }
    if matches!(channel, ChannelSpec::RayleighBlock { .. })
        && matches!(coding, CodingSpec::None | CodingSpec::Ssd { .. } | CodingSpec::Precode)
    {
        return Err(cfg_err(
            path,
            kind_item.line,
            "kind = rayleigh_block is only wired to scheme = alamouti",
        ));
    }

    // [sim]
    let snr_item = require("sim", "snr_db")?;
    let snr_db = parse_snr_list(&snr_item.value)
        .ok_or_else(|| cfg_err(path, snr_item.line, format!("invalid snr_db '{}'", snr_item.value)))?;
    let max_frames: u64 = match get("sim", "max_frames") {
        Some(item) => parse_num(path, item, "max_frames")?,
        None => 100_000,
    };
    let target_item = get("sim", "target_bit_errors");
    let target_bit_errors: u64 = match target_item {
        Some(item) => parse_num(path, item, "target_bit_errors")?,
        None => 200,
    };
    if target_bit_errors < 100 {
        return Err(cfg_err(
            path,
            target_item.map(|i| i.line).unwrap_or(0),
            format!("target_bit_errors {target_bit_errors} < 100 breaks interval validity"),
        ));
    }
    let master_seed: u64 = match get("sim", "master_seed") {
        Some(item) => parse_num(path, item, "master_seed")?,
        None => crate::harness::experiments::DEFAULT_SEED,
    };
    let equalizer = match get("sim", "equalizer").map(|i| i.value.as_str()) {
        None | Some("mmse") => EqualizerSpec::Mmse,
        Some("zf") => EqualizerSpec::Zf,
        Some("ml") => EqualizerSpec::Ml,
        Some(other) => {
            return Err(cfg_err(
                path,
                get("sim", "equalizer").map(|i| i.line).unwrap_or(0),
                format!("unknown equalizer '{other}' (zf | mmse | ml)"),
            ))
        }
    };

    Ok(ExperimentConfig {
        m,
        n,
        cp_len,
        constellation,
        channel,
        coding,
        snr_db,
        max_frames,
        target_bit_errors,
        master_seed,
        equalizer,
    })
}

impl ExperimentConfig {
    /// Canonical serialization: sorted `section.key=value` lines of the
    /// parsed values. Whitespace, comments, ordering, and synonymous
    /// spellings in the source file do not affect it.
    pub fn canonical_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        lines.push(format!("modem.constellation={}", self.constellation));
        lines.push(format!("modem.cp_len={}", self.cp_len));
        lines.push(format!("modem.m={}", self.m));
        lines.push(format!("modem.n={}", self.n));
        match &self.channel {
            ChannelSpec::Taps { delays, gains, doppler, normalize } => {
                lines.push(format!(
                    "channel.delays={}",
                    delays.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
                ));
                lines.push(format!(
                    "channel.doppler={}",
                    match doppler {
                        DopplerSpec::None => "none".to_string(),
                        DopplerSpec::Constant(w) => format!("constant:{w}"),
                        DopplerSpec::Linear(s) => format!("linear:{s}"),
                        DopplerSpec::PerTap(v) => format!(
                            "pertap:{}",
                            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                        ),
                    }
                ));
                lines.push(format!(
                    "channel.gains={}",
                    gains
                        .iter()
                        .map(|g| format!("{}{}{}i", g.re, if g.im < 0.0 { "" } else { "+" }, g.im))
                        .collect::<Vec<_>>()
                        .join(",")
                ));
                lines.push(format!("channel.kind=taps"));
                lines.push(format!("channel.normalize={normalize}"));
            }
            ChannelSpec::RayleighBlock { scalars } => {
                lines.push("channel.kind=rayleigh_block".to_string());
                lines.push(format!("channel.scalars={scalars}"));
            }
        }
        match &self.coding {
            CodingSpec::None => lines.push("coding.scheme=none".to_string()),
            CodingSpec::Ssd { angle, dim, stride } => {
                lines.push(format!("coding.scheme=ssd"));
                lines.push(format!("coding.ssd_angle={angle}"));
                lines.push(format!("coding.ssd_dim={dim}"));
                if let Some(s) = stride {
                    lines.push(format!("coding.ssd_stride={s}"));
                }
            }
            CodingSpec::Precode => lines.push("coding.scheme=precode".to_string()),
            CodingSpec::Alamouti => lines.push("coding.scheme=alamouti".to_string()),
        }
        lines.push(format!(
            "sim.equalizer={}",
            match self.equalizer {
                EqualizerSpec::Zf => "zf",
                EqualizerSpec::Mmse => "mmse",
                EqualizerSpec::Ml => "ml",
            }
        ));
        lines.push(format!("sim.master_seed={}", self.master_seed));
        lines.push(format!("sim.max_frames={}", self.max_frames));
        lines.push(format!(
            "sim.snr_db={}",
            self.snr_db.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        ));
        lines.push(format!("sim.target_bit_errors={}", self.target_bit_errors));
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "\
# example configuration
[modem]
m = 1
n = 64
cp_len = 8
constellation = qpsk

[channel]
kind = taps
delays = 0,1
gains = 0.7071067811865476,0.7071067811865476
doppler = none

[sim]
snr_db = 10:5:20
max_frames = 1000
target_bit_errors = 150
master_seed = 7
equalizer = mmse
";

    #[test]
    fn parses_a_valid_config() {
        let cfg = parse_config("test.ini", GOOD).unwrap();
        assert_eq!(cfg.m, 1);
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.snr_db, vec![10.0, 15.0, 20.0]);
        assert_eq!(cfg.master_seed, 7);
        assert!(matches!(cfg.channel, ChannelSpec::Taps { .. }));
        assert!(matches!(cfg.coding, CodingSpec::None));
    }

    #[test]
    fn unknown_key_is_a_line_precise_error() {
        let bad = GOOD.replace("max_frames = 1000", "max_frames = 1000\nbogus = 3");
        let err = parse_config("test.ini", &bad).unwrap_err();
        match err {
            Error::Config { path, line, message } => {
                assert_eq!(path, "test.ini");
                assert_eq!(line, 17);
                assert!(message.contains("bogus"), "{message}");
            }
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn unknown_section_and_bad_values_error() {
        assert!(parse_config("t", "[nope]\n").is_err());
        let bad = GOOD.replace("constellation = qpsk", "constellation = 8psk");
        assert!(parse_config("t", &bad).is_err());
        let bad = GOOD.replace("snr_db = 10:5:20", "snr_db = ");
        assert!(parse_config("t", &bad).is_err());
        let bad = GOOD.replace("target_bit_errors = 150", "target_bit_errors = 10");
        assert!(parse_config("t", &bad).is_err());
    }

    #[test]
    fn canonical_text_ignores_formatting() {
        let reordered = "\
[sim]
equalizer = mmse
master_seed = 7
target_bit_errors = 150
max_frames = 1000
snr_db = 10,15,20

[channel]
doppler   =   none
gains = 0.7071067811865476 , 0.7071067811865476
kind = taps
delays = 0, 1

[modem]
constellation = qpsk
cp_len = 8
n = 64
m = 1
";
        let a = parse_config("a", GOOD).unwrap();
        let b = parse_config("b", reordered).unwrap();
        assert_eq!(a.canonical_text(), b.canonical_text());
    }

    #[test]
    fn complex_parsing_variants() {
        assert_eq!(parse_complex("1.5"), Some(Complex64::new(1.5, 0.0)));
        assert_eq!(parse_complex("1+2i"), Some(Complex64::new(1.0, 2.0)));
        assert_eq!(parse_complex("-0.5-0.25i"), Some(Complex64::new(-0.5, -0.25)));
        assert_eq!(parse_complex("2i"), Some(Complex64::new(0.0, 2.0)));
        assert_eq!(parse_complex("1e-3+2e-4i"), Some(Complex64::new(1e-3, 2e-4)));
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn snr_parse_variants() {
        assert_eq!(parse_snr_list("15"), Some(vec![15.0]));
        assert_eq!(parse_snr_list("0:10:30"), Some(vec![0.0, 10.0, 20.0, 30.0]));
        assert_eq!(parse_snr_list("12, 14"), Some(vec![12.0, 14.0]));
        assert_eq!(parse_snr_list("10:0:20"), None);
        assert_eq!(parse_snr_list("x"), None);
    }
}
