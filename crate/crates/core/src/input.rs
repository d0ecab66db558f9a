//! Density-spec documents: a JSON tree of objects with fields
//! `kind`, `amplitude`, `scale`, `offset`, `children`. Keys are
//! order-insensitive, unknown keys are rejected, and every validation
//! error names the offending field.

use crate::charge::DensityModel;
use crate::error::{Error, Result};
use crate::vec3::Vec3;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    kind: String,
    amplitude: Option<f64>,
    scale: Option<f64>,
    offset: Option<[f64; 3]>,
    children: Option<Vec<RawDensity>>,
}

fn build(raw: &RawDensity, path: &str) -> Result<DensityModel> {
    let amplitude = raw.amplitude.unwrap_or(1.0);
    let scale = raw.scale.unwrap_or(1.0);
    let offset: Vec3 = raw.offset.unwrap_or([0.0; 3]).into();
    let require_no_children = |field: &str| -> Result<()> {
        if raw.children.is_some() {
            return Err(Error::Input(format!(
                "{path}: field 'children' is only valid for kind=superposition (kind={field})"
            )));
        }
        Ok(())
    };
    let require_positive_scale = || -> Result<()> {
        if scale <= 0.0 {
            return Err(Error::Input(format!(
                "{path}: field 'scale' must be positive for kind={}, got {scale}",
                raw.kind
            )));
        }
        Ok(())
    };
    let model = match raw.kind.as_str() {
        "point" => {
            require_no_children("point")?;
            DensityModel::point(amplitude)
        }
        "uniform_sphere" => {
            require_no_children("uniform_sphere")?;
            require_positive_scale()?;
            DensityModel::uniform_sphere(amplitude, scale)?
        }
        "exponential" => {
            require_no_children("exponential")?;
            require_positive_scale()?;
            DensityModel::exponential(amplitude, scale)?
        }
        "gaussian" => {
            require_no_children("gaussian")?;
            require_positive_scale()?;
            DensityModel::gaussian(amplitude, scale)?
        }
        "hydrogen1s" => {
            require_no_children("hydrogen1s")?;
            require_positive_scale()?;
            DensityModel::hydrogen1s(amplitude, scale)?
        }
        "superposition" => {
            if raw.amplitude.is_some() || raw.scale.is_some() {
                return Err(Error::Input(format!(
                    "{path}: a superposition carries no own 'amplitude' or 'scale'"
                )));
            }
            let children = raw.children.as_deref().unwrap_or(&[]);
            if children.is_empty() {
                return Err(Error::Input(format!(
                    "{path}: field 'children' must hold at least one entry"
                )));
            }
            let built: Result<Vec<_>> = children
                .iter()
                .enumerate()
                .map(|(i, c)| build(c, &format!("{path}.children[{i}]")))
                .collect();
            DensityModel::superposition(built?)?
        }
        other => {
            return Err(Error::Input(format!(
                "{path}: unknown kind '{other}' (expected point, uniform_sphere, exponential, gaussian, hydrogen1s or superposition)"
            )));
        }
    };
    Ok(model.with_offset(offset))
}

/// Parse a density-spec document into a validated [`DensityModel`].
pub fn parse_density_spec(text: &str) -> Result<DensityModel> {
    let raw: RawDensity =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("density spec: {e}")))?;
    build(&raw, "density")
}
