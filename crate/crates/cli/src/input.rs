//! Model arguments: files in the text format or `gen:NAME` generators.

use anyhow::{anyhow, bail, Result};
use ghml_core::hm_classes::{gen_dense_attach, gen_unit, truncate, Fig3State, GxState};
use ghml_core::{
    build_surrogate, gen_fig3, gen_gx, parse_model, stratified_lazy, KripkeStructure, ModelFile, SymbolicGst,
};

pub enum Lazy {
    Fig3,
    Gx,
}

impl Lazy {
    pub fn truncate(&self, depth: usize, width: usize) -> KripkeStructure {
        match self {
            Lazy::Fig3 => truncate(&gen_fig3().0, depth, width),
            Lazy::Gx => truncate(&gen_gx(), depth, width),
        }
    }

    pub fn stratified(&self, s: &str, t: &str, depth: usize) -> Result<Option<usize>> {
        Ok(match self {
            Lazy::Fig3 => {
                let (s, t): (Fig3State, Fig3State) = (s.parse()?, t.parse()?);
                stratified_lazy(&gen_fig3().0, &s, &t, depth)?
            }
            Lazy::Gx => {
                let (s, t): (GxState, GxState) = (s.parse()?, t.parse()?);
                stratified_lazy(&gen_gx(), &s, &t, depth)?
            }
        })
    }
}

pub enum Input {
    Model(Box<ModelFile>),
    Lazy(Lazy),
}

impl Input {
    pub fn load(spec: &str) -> Result<Self> {
        if let Some(name) = spec.strip_prefix("gen:") {
            return Ok(match name {
                "unit" => Input::Model(Box::new(ModelFile::Gst(gen_unit()))),
                "denseattach" => Input::Model(Box::new(ModelFile::Gst(gen_dense_attach()))),
                "fig3" => Input::Lazy(Lazy::Fig3),
                "gx" => Input::Lazy(Lazy::Gx),
                other => bail!("unknown generator `{other}` (known: fig3, gx, unit, denseattach)"),
            });
        }
        let text = std::fs::read_to_string(spec).map_err(|e| anyhow!("{spec}: {e}"))?;
        let model = parse_model(&text).map_err(|e| anyhow!("{spec}:{e}"))?;
        log::debug!("loaded `{}` from {spec}", model.name());
        Ok(Input::Model(Box::new(model)))
    }

    pub fn gst(self) -> Result<SymbolicGst> {
        match self {
            Input::Model(m) => match *m {
                ModelFile::Gst(g) => Ok(g),
                ModelFile::Kripke(k) => bail!("`{}` is a Kripke structure; a GST is required", k.name),
            },
            Input::Lazy(_) => bail!("generators fig3 and gx are not GSTs"),
        }
    }

    /// A finite structure; GSTs are replaced by their surrogates.
    pub fn kripke(self) -> Result<KripkeStructure> {
        match self {
            Input::Model(m) => match *m {
                ModelFile::Gst(g) => Ok(build_surrogate(&g)),
                ModelFile::Kripke(k) => Ok(k),
            },
            Input::Lazy(_) => bail!("infinite generator; use `truncate` for a finite structure"),
        }
    }
}
