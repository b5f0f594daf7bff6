//! Quad emission for the factual graph and the per-object nanopublications.

use std::collections::{BTreeMap, HashMap};

use crate::citeparse::{CanonicalCitationRef, GeneralReference, Passage, WorkRegistry};
use crate::error::ModelError;
use crate::graph::integrity::{check_integrity, IntegrityError};
use crate::graph::record::{IssueClass, PreparedRecord, RecordIssue};
use crate::ingest::SourceType;
use crate::model::{mint_iri, Dataset, Iri, Literal, PrefixMap, Quad, Term};
use crate::normalize::{normalize_person, slugify, PersonRef, TimeSpan};
use crate::reconcile::{resolve_alias, AuthoritySource, EntityKind, Mode, Reconciler, ResolvedEntity};
use crate::vocab::{crm, dct, ecrm, efrbroo, hico, hucit, np, owl, prov, rdf, rdfs, schema, wdt};

pub const FACTUAL_GRAPH: &str = "factual_data";

/// IRIs of one nanopublication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Nanopublication {
    pub item_id: String,
    pub np: Iri,
    pub head_graph: Iri,
    pub assertion_graph: Iri,
    pub provenance_graph: Iri,
    pub pubinfo_graph: Iri,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub base: Iri,
    pub publisher: Iri,
    /// xsd:dateTime lexical form.
    pub build_time: String,
    pub mode: Mode,
    pub skip_empty_literals: bool,
    pub interpretation_act_class: Iri,
    /// Century label to art-period label.
    pub period_names: BTreeMap<String, String>,
}

impl BuildOptions {
    pub fn new(base: Iri, publisher: Iri, build_time: impl Into<String>) -> Self {
        BuildOptions {
            base,
            publisher,
            build_time: build_time.into(),
            mode: Mode::Offline,
            skip_empty_literals: false,
            interpretation_act_class: Iri::new(format!("{}InterpretationAct", prov::NS))
                .expect("static IRI"),
            period_names: BTreeMap::new(),
        }
    }
}

/// Builds the IRIs of the minting scheme under one base.
#[derive(Debug, Clone)]
pub struct Ids {
    base: Iri,
}

impl Ids {
    pub fn new(base: Iri) -> Self {
        Ids { base }
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    pub fn factual_graph(&self) -> Iri {
        self.base.join(FACTUAL_GRAPH).expect("base validated")
    }

    pub fn mint(&self, segments: &[&str]) -> Result<Iri, ModelError> {
        mint_iri(&self.base, segments)
    }

    pub fn node(&self, kind: &str, slug: &str) -> Result<Iri, ModelError> {
        self.mint(&[kind, slug])
    }

    pub fn item(&self, id: &str) -> Result<Iri, ModelError> {
        self.mint(&["item", id])
    }

    pub fn expression(&self, id: &str) -> Result<Iri, ModelError> {
        self.mint(&["item", &format!("{id}-expression")])
    }

    pub fn nanopub(&self, id: &str) -> Result<Nanopublication, ModelError> {
        Ok(Nanopublication {
            item_id: id.to_string(),
            np: self.mint(&[&format!("np-{id}")])?,
            head_graph: self.mint(&[&format!("head{id}")])?,
            assertion_graph: self.mint(&[&format!("assertion{id}")])?,
            provenance_graph: self.mint(&[&format!("provenance{id}")])?,
            pubinfo_graph: self.mint(&[&format!("pubInfo{id}")])?,
        })
    }

    pub fn interpretation_act(&self, id: &str) -> Result<Iri, ModelError> {
        self.mint(&["int-act", id])
    }
}

/// Labels for the fixed vocabulary nodes the builder refers to.
const FIXED_TYPES: [(&str, &str); 6] = [
    ("secolo", "Secolo"),
    ("anno", "Anno"),
    ("collocazione", "Collocazione"),
    ("citta", "Città"),
    ("nazione", "Nazione"),
    ("periodo", "Periodo"),
];

pub const CRITERION_SLUG: &str = "sources-association";
pub const CRITERION_LABEL: &str = "Associazione di Fonti";
pub const APPROACH_SLUG: &str = "iconographic-approach";
pub const APPROACH_LABEL: &str = "Iconographical Approach";

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("vocabulary IRI")
}

#[derive(Debug)]
pub struct BuildOutput {
    pub dataset: Dataset,
    pub nanopubs: Vec<Nanopublication>,
    pub issues: Vec<RecordIssue>,
}

/// Accumulates quads record by record; `finish` checks integrity.
pub struct GraphBuilder {
    ids: Ids,
    options: BuildOptions,
    factual: Iri,
    dataset: Dataset,
    entities: HashMap<(EntityKind, String), ResolvedEntity>,
    citations: HashMap<String, Iri>,
    nanopubs: Vec<Nanopublication>,
    issues: Vec<RecordIssue>,
    seen_items: HashMap<String, usize>,
}

impl GraphBuilder {
    pub fn new(options: BuildOptions) -> Self {
        let ids = Ids::new(options.base.clone());
        let factual = ids.factual_graph();
        let dataset = Dataset::new(PrefixMap::standard(&options.base));
        let mut builder = GraphBuilder {
            ids,
            options,
            factual,
            dataset,
            entities: HashMap::new(),
            citations: HashMap::new(),
            nanopubs: Vec::new(),
            issues: Vec::new(),
            seen_items: HashMap::new(),
        };
        if builder.options.build_time.is_empty() {
            builder.options.build_time = "1970-01-01T00:00:00".into();
        }
        builder
    }

    pub fn ids(&self) -> &Ids {
        &self.ids
    }

    /// Queries an online pass would issue for these records, for
    /// [`Reconciler::prefetch`].
    pub fn lookup_queries(records: &[PreparedRecord], registry: &WorkRegistry) -> Vec<(EntityKind, String)> {
        let mut out = Vec::new();
        for r in records {
            for p in [&r.author, &r.interpreter].into_iter().flatten() {
                out.push((EntityKind::Person, p.raw.trim().to_string()));
            }
            if let Some(loc) = &r.location {
                out.push((EntityKind::Place, loc.institution_label.clone()));
                if let Some(city) = &loc.city_label {
                    out.push((EntityKind::Place, city.clone()));
                }
            }
            for c in &r.citations {
                if let Some(entry) = registry.by_slug(&c.work_key) {
                    out.push((EntityKind::Work, format!("{}, {}", entry.author_label, entry.name)));
                }
            }
            for g in &r.references {
                out.push((EntityKind::Work, g.raw.trim().to_string()));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn add(&mut self, s: &Iri, p: &str, o: impl Into<Term>) {
        let q = Quad::new(s.clone(), iri(p), o, self.factual.clone());
        self.dataset.insert(q);
    }

    fn add_in(&mut self, g: &Iri, s: &Iri, p: &str, o: impl Into<Term>) {
        self.dataset.insert(Quad::new(s.clone(), iri(p), o, g.clone()));
    }

    fn label(&mut self, s: &Iri, label: &str) {
        self.add(s, rdfs::LABEL, Literal::string(label));
    }

    fn issue(&mut self, item_id: &str, field: &str, class: IssueClass, message: impl ToString) {
        self.issues.push(RecordIssue {
            item_id: item_id.to_string(),
            field: field.to_string(),
            class,
            message: message.to_string(),
        });
    }

    fn type_node(&mut self, slug: &str, label: &str) -> Result<Iri, ModelError> {
        let node = self.ids.node("type", slug)?;
        self.add(&node, rdf::TYPE, iri(ecrm::E55_TYPE));
        self.label(&node, label);
        Ok(node)
    }

    fn fixed_type(&mut self, slug: &str) -> Iri {
        let label = FIXED_TYPES
            .iter()
            .find(|(s, _)| *s == slug)
            .map_or(slug, |(_, l)| l);
        self.type_node(slug, label).expect("fixed slugs are valid")
    }

    fn source_type(&mut self, t: SourceType) -> Iri {
        self.type_node(t.type_slug(), t.label()).expect("fixed slugs are valid")
    }

    /// Resolves once per (kind, slug); later calls reuse the first result.
    fn entity(
        &mut self,
        reconciler: &mut Reconciler,
        kind: EntityKind,
        slug: &str,
        label: &str,
        raw: &str,
    ) -> ResolvedEntity {
        let key = (kind, slug.to_string());
        if let Some(e) = self.entities.get(&key) {
            return e.clone();
        }
        let resolved = reconciler.resolve(
            ResolvedEntity::new(kind, slug, label),
            raw,
            self.options.mode,
        );
        self.entities.insert(key, resolved.clone());
        resolved
    }

    fn same_as(&mut self, node: &Iri, entity: &ResolvedEntity) {
        for link in &entity.links {
            if let Some(target) = link.source.entity_iri(&link.external_id) {
                match Iri::new(&target) {
                    Ok(t) => self.add(node, owl::SAME_AS, t),
                    Err(e) => log::warn!("skipping sameAs {target:?}: {e}"),
                }
            }
        }
    }

    fn slug_for(reconciler: &Reconciler, raw: &str, fallback: &str) -> String {
        resolve_alias(raw, reconciler.aliases())
            .map(str::to_string)
            .unwrap_or_else(|| fallback.to_string())
    }

    fn person(&mut self, reconciler: &mut Reconciler, person: &PersonRef) -> Result<Iri, ModelError> {
        let slug = Self::slug_for(reconciler, &person.raw, &person.slug);
        let entity = self.entity(reconciler, EntityKind::Person, &slug, &person.display_label, person.raw.trim());
        let node = self.ids.node("person", &entity.slug)?;
        self.add(&node, rdf::TYPE, iri(ecrm::E21_PERSON));
        self.label(&node, &entity.label);
        self.same_as(&node, &entity);
        Ok(node)
    }

    fn time_span(&mut self, span: &TimeSpan) -> Result<Iri, ModelError> {
        let node = self.ids.node("time", &slugify(&span.label).map_err(|_| ModelError::InvalidSegment(span.label.clone()))?)?;
        let kind = self.fixed_type(span.kind.slug());
        self.add(&node, rdf::TYPE, iri(ecrm::E52_TIME_SPAN));
        self.label(&node, &span.label);
        self.add(&node, ecrm::P2_HAS_TYPE, kind);
        self.add(&node, crm::P82A_BEGIN_OF_THE_BEGIN, Literal::date(span.begin.to_string())?);
        self.add(&node, crm::P82B_END_OF_THE_END, Literal::date(span.end.to_string())?);
        if let Some(period) = self.options.period_names.get(&span.label).cloned() {
            let period_node = self.ids.node("period", &slugify(&period).map_err(|_| ModelError::InvalidSegment(period.clone()))?)?;
            let period_type = self.fixed_type("periodo");
            self.add(&period_node, rdf::TYPE, iri(ecrm::E52_TIME_SPAN));
            self.add(&period_node, ecrm::P2_HAS_TYPE, period_type);
            self.label(&period_node, &period);
            self.add(&node, ecrm::P10_FALLS_WITHIN, period_node);
        }
        Ok(node)
    }

    fn place(
        &mut self,
        reconciler: &mut Reconciler,
        label: &str,
        type_slug: &str,
    ) -> Result<(Iri, ResolvedEntity), ModelError> {
        let fallback = slugify(label).map_err(|_| ModelError::InvalidSegment(label.to_string()))?;
        let slug = Self::slug_for(reconciler, label, &fallback);
        let entity = self.entity(reconciler, EntityKind::Place, &slug, label, label);
        let node = self.ids.node("place", &entity.slug)?;
        let kind = self.fixed_type(type_slug);
        self.add(&node, rdf::TYPE, iri(ecrm::E53_PLACE));
        self.label(&node, &entity.label);
        self.add(&node, ecrm::P2_HAS_TYPE, kind);
        if let Some(c) = entity.coordinates() {
            self.add(&node, wdt::P625_COORDINATES, Literal::string(c.to_string()));
        }
        self.same_as(&node, &entity);
        Ok((node, entity))
    }

    fn location(
        &mut self,
        reconciler: &mut Reconciler,
        loc: &crate::normalize::PlaceRef,
    ) -> Result<Iri, ModelError> {
        let (inst, inst_entity) = self.place(reconciler, &loc.institution_label, "collocazione")?;
        let mut within = Vec::new();
        let mut country = inst_entity.country().map(str::to_string).or(loc.country_label.clone());
        if let Some(city) = &loc.city_label {
            let (city_node, city_entity) = self.place(reconciler, city, "citta")?;
            if country.is_none() {
                country = city_entity.country().map(str::to_string);
            }
            within.push(city_node);
        }
        if let Some(country) = country {
            let (country_node, _) = self.place(reconciler, &country, "nazione")?;
            if let Some(city_node) = within.first().cloned() {
                self.add(&city_node, ecrm::P89_FALLS_WITHIN, country_node.clone());
            }
            within.push(country_node);
        }
        for w in within {
            self.add(&inst, ecrm::P89_FALLS_WITHIN, w);
        }
        Ok(inst)
    }

    fn work_node(
        &mut self,
        reconciler: &mut Reconciler,
        slug: &str,
        default_label: &str,
        raw: &str,
        source_type: SourceType,
        creator: Option<Iri>,
    ) -> Result<Iri, ModelError> {
        let entity = self.entity(reconciler, EntityKind::Work, slug, default_label, raw);
        let node = self.ids.node("work", &entity.slug)?;
        let kind = self.source_type(source_type);
        self.add(&node, rdf::TYPE, iri(efrbroo::F1_WORK));
        self.label(&node, &entity.label);
        self.add(&node, ecrm::P2_HAS_TYPE, kind);
        if let Some(c) = creator {
            self.add(&node, dct::CREATOR, c);
        }
        self.same_as(&node, &entity);
        Ok(node)
    }

    fn citation(
        &mut self,
        reconciler: &mut Reconciler,
        registry: &WorkRegistry,
        c: &CanonicalCitationRef,
    ) -> Result<(Iri, Option<Iri>), ModelError> {
        let next = self.citations.len() + 1;
        let node = match self.citations.get(&c.urn) {
            Some(n) => n.clone(),
            None => {
                let n = self.ids.node("cit", &next.to_string())?;
                self.citations.insert(c.urn.clone(), n.clone());
                n
            }
        };
        let fonte = self.source_type(SourceType::FonteClassica);
        self.add(&node, rdf::TYPE, iri(hucit::CANONICAL_CITATION));
        self.label(&node, &c.raw_label);
        self.add(&node, ecrm::P2_HAS_TYPE, fonte);
        let content = self.ids.node("str", &c.content_slug)?;
        let passage = Passage::from_urn(&c.urn).map(|p| p.to_string()).unwrap_or_default();
        self.add(&node, hucit::HAS_CONTENT, content.clone());
        if !passage.is_empty() {
            self.label(&content, &passage);
        }
        self.add(&node, rdfs::SEE_ALSO, Literal::any_uri(c.perseus_url.as_str())?);
        let work = match registry.by_slug(&c.work_key) {
            Some(entry) => {
                let author = PersonRef {
                    raw: entry.author_label.clone(),
                    display_label: entry.author_label.clone(),
                    slug: entry.author_slug.clone(),
                };
                let creator = self.person(reconciler, &author)?;
                let raw = format!("{}, {}", entry.author_label, entry.name);
                let default_label = format!("{} | {}", entry.author_label, entry.name);
                let work = self.work_node(
                    reconciler,
                    &entry.work_slug,
                    &default_label,
                    &raw,
                    SourceType::FonteClassica,
                    Some(creator),
                )?;
                if let Some(viaf) = entry.viaf_id.as_deref().and_then(|v| AuthoritySource::Viaf.entity_iri(v)) {
                    self.add(&work, owl::SAME_AS, Iri::new(viaf)?);
                }
                self.add(&node, dct::IS_PART_OF, work.clone());
                Some(work)
            }
            None => None,
        };
        Ok((node, work))
    }

    fn reference(
        &mut self,
        reconciler: &mut Reconciler,
        r: &GeneralReference,
        author_order: crate::normalize::NameOrder,
    ) -> Result<Iri, ModelError> {
        let raw = r.raw.trim();
        let fallback = slugify(raw).map_err(|_| ModelError::InvalidSegment(raw.to_string()))?;
        let slug = Self::slug_for(reconciler, raw, &fallback);
        let creator = match normalize_person(&r.author_raw, author_order) {
            Ok(p) => Some(self.person(reconciler, &p)?),
            Err(_) => None,
        };
        let default_label = if r.author_raw.is_empty() {
            r.work_title.clone()
        } else {
            format!("{} | {}", r.author_raw, r.work_title)
        };
        self.work_node(reconciler, &slug, &default_label, raw, r.type_tag, creator)
    }

    /// Adds one record: factual quads always, a nanopublication when the
    /// record carries a theme.
    pub fn add_record(
        &mut self,
        record: &PreparedRecord,
        reconciler: &mut Reconciler,
        registry: &WorkRegistry,
        reference_author_order: crate::normalize::NameOrder,
    ) -> Result<(), IntegrityError> {
        let id = record.item_id.clone();
        if let Some(first_row) = self.seen_items.get(&id) {
            let msg = format!("item id already used by row {first_row}; record skipped");
            self.issue(&id, "item_id", IssueClass::Duplicate, msg);
            return Ok(());
        }
        self.seen_items.insert(id.clone(), self.seen_items.len() + 1);
        let result = self.add_record_inner(record, reconciler, registry, reference_author_order);
        if let Err(IntegrityError::Model { item_id, source }) = &result {
            self.issue(item_id, "iri", IssueClass::Integrity, source);
        }
        result
    }

    fn add_record_inner(
        &mut self,
        record: &PreparedRecord,
        reconciler: &mut Reconciler,
        registry: &WorkRegistry,
        reference_author_order: crate::normalize::NameOrder,
    ) -> Result<(), IntegrityError> {
        let id = &record.item_id;
        let model = |source: ModelError| IntegrityError::Model {
            item_id: id.clone(),
            source,
        };
        if record.theme.is_some() && record.interpreter.is_none() {
            return Err(IntegrityError::MissingInterpreter(id.clone()));
        }

        let item = self.ids.item(id).map_err(model)?;
        let expression = self.ids.expression(id).map_err(model)?;
        self.add(&item, rdf::TYPE, iri(efrbroo::F4_MANIFESTATION_SINGLETON));
        self.add(&expression, rdf::TYPE, iri(efrbroo::F2_EXPRESSION));
        self.add(&item, efrbroo::R42_REPRESENTATIVE_FOR, expression.clone());

        for t in &record.typologies {
            let node = self.type_node(&t.slug, &t.label).map_err(model)?;
            self.add(&item, ecrm::P2_HAS_TYPE, node);
        }
        if !record.title.is_empty() {
            self.add(&item, dct::TITLE, Literal::string(&record.title));
        }
        for k in &record.keywords {
            self.add(&item, dct::SUBJECT, Literal::string(k));
        }
        if !record.description.is_empty() {
            self.add(&item, dct::DESCRIPTION, Literal::string(&record.description));
        }
        let skip_empty = self.options.skip_empty_literals;
        for (pred, value, field) in [
            (schema::IMAGE, &record.image_url, "image_url"),
            (rdfs::SEE_ALSO, &record.see_also, "see_also"),
        ] {
            if value.is_empty() && skip_empty {
                continue;
            }
            match Literal::any_uri(value.as_str()) {
                Ok(lit) => self.add(&item, pred, lit),
                Err(e) => self.issue(id, field, IssueClass::Normalize, e),
            }
        }
        if let Some(author) = &record.author {
            let node = self.person(reconciler, author).map_err(model)?;
            self.add(&item, dct::CREATOR, node);
        }
        for span in [&record.century, &record.year].into_iter().flatten() {
            let node = self.time_span(span).map_err(model)?;
            self.add(&item, ecrm::P4_HAS_TIME_SPAN, node);
        }
        if let Some(loc) = &record.location {
            let node = self.location(reconciler, loc).map_err(model)?;
            self.add(&item, ecrm::P55_HAS_CURRENT_LOCATION, node);
        }

        let mut cited: Vec<Iri> = Vec::new();
        for c in &record.citations {
            let (cit, work) = self.citation(reconciler, registry, c).map_err(model)?;
            cited.push(cit);
            cited.extend(work);
        }
        for r in &record.references {
            match self.reference(reconciler, r, reference_author_order) {
                Ok(work) => cited.push(work),
                Err(e) => self.issue(id, "sources", IssueClass::Normalize, e),
            }
        }

        let (Some(theme), Some(interpreter)) = (&record.theme, &record.interpreter) else {
            return Ok(());
        };
        let theme_node = self.ids.node("categ", &theme.slug).map_err(model)?;
        self.add(&theme_node, rdf::TYPE, iri(ecrm::E55_TYPE));
        self.label(&theme_node, &theme.label);
        let performer = self.person(reconciler, interpreter).map_err(model)?;

        let npub = self.ids.nanopub(id).map_err(model)?;
        let act = self.ids.interpretation_act(id).map_err(model)?;
        let (a, p, i, h) = (
            npub.assertion_graph.clone(),
            npub.provenance_graph.clone(),
            npub.pubinfo_graph.clone(),
            npub.head_graph.clone(),
        );

        self.add_in(&a, &expression, ecrm::P67_REFERS_TO, theme_node.clone());
        for c in &cited {
            self.add_in(&a, c, ecrm::P67_REFERS_TO, theme_node.clone());
        }

        if let Some(at) = &record.interpreted_at {
            let lit = Literal::date_time(at.as_str()).map_err(model)?;
            self.add_in(&p, &a, prov::WAS_GENERATED_AT_TIME, lit);
        } else {
            self.issue(id, "interpretation_date", IssueClass::Normalize, "no interpretation date");
        }
        self.add_in(&p, &a, prov::WAS_GENERATED_BY, act.clone());
        let class = self.options.interpretation_act_class.clone();
        self.add_in(&p, &act, rdf::TYPE, class);
        let criterion = self.ids.mint(&[CRITERION_SLUG]).map_err(model)?;
        let approach = self.ids.mint(&[APPROACH_SLUG]).map_err(model)?;
        self.add_in(&p, &act, hico::HAS_INTERPRETATION_CRITERION, criterion.clone());
        self.add_in(&p, &act, hico::HAS_INTERPRETATION_TYPE, approach.clone());
        self.add_in(&p, &act, prov::WAS_ATTRIBUTED_TO, performer);
        self.label(&criterion, CRITERION_LABEL);
        self.label(&approach, APPROACH_LABEL);

        let publisher = self.options.publisher.clone();
        let built = Literal::date_time(self.options.build_time.as_str()).map_err(model)?;
        self.add_in(&i, &npub.np, prov::WAS_ATTRIBUTED_TO, publisher);
        self.add_in(&i, &npub.np, prov::WAS_GENERATED_AT_TIME, built);

        self.add_in(&h, &npub.np, rdf::TYPE, iri(np::NANOPUBLICATION));
        self.add_in(&h, &npub.np, np::HAS_ASSERTION, a);
        self.add_in(&h, &npub.np, np::HAS_PROVENANCE, p);
        self.add_in(&h, &npub.np, np::HAS_PUBLICATION_INFO, i);
        self.nanopubs.push(npub);
        Ok(())
    }

    /// Runs the integrity checks over everything added so far.
    #[allow(clippy::result_large_err)]
    pub fn finish(self) -> Result<BuildOutput, (IntegrityError, BuildOutput)> {
        let mut nanopubs = self.nanopubs;
        nanopubs.sort();
        let output = BuildOutput {
            dataset: self.dataset,
            nanopubs,
            issues: self.issues,
        };
        let factual = self.ids.factual_graph();
        match check_integrity(&output.dataset, &factual) {
            Ok(()) => Ok(output),
            Err(e) => Err((e, output)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citeparse::{ReferenceOverrides, WorkEntry};
    use crate::graph::record::{prepare_record, NameOrders, PrepareContext};
    use crate::ingest::RawRecord;
    use crate::reconcile::{AliasTable, AuthorityFixture};
    use crate::vocab::DEFAULT_BASE;

    fn options() -> BuildOptions {
        let base = Iri::new(DEFAULT_BASE).unwrap();
        let publisher = Iri::new(format!("{DEFAULT_BASE}person/dharc")).unwrap();
        BuildOptions::new(base, publisher, "2020-08-24T09:00:00")
    }

    fn registry() -> WorkRegistry {
        WorkRegistry::new(vec![WorkEntry {
            name: "Eneide".into(),
            aliases: vec![],
            cts_base_urn: "urn:cts:latinLit:phi0690.phi003.perseus-eng1".into(),
            author_label: "Virgilio".into(),
            author_slug: "virgil".into(),
            work_slug: "virgil-aeneis".into(),
            viaf_id: None,
        }])
        .unwrap()
    }

    #[allow(clippy::result_large_err)]
    fn build(raws: &[RawRecord]) -> Result<BuildOutput, (IntegrityError, BuildOutput)> {
        let reg = registry();
        let overrides = ReferenceOverrides::default();
        let ctx = PrepareContext {
            registry: &reg,
            overrides: &overrides,
            name_orders: NameOrders::default(),
        };
        let mut rec = Reconciler::new(AliasTable::default(), AuthorityFixture::default());
        let mut b = GraphBuilder::new(options());
        for (i, raw) in raws.iter().enumerate() {
            let (r, _) = prepare_record(raw, i, &ctx);
            if let Err(e) = b.add_record(&r, &mut rec, &reg, NameOrders::default().reference_author) {
                panic!("{e}");
            }
        }
        b.finish()
    }

    fn q(s: &str, p: &str, o: Term, g: &str) -> Quad {
        let m = |x: &str| Iri::new(format!("{DEFAULT_BASE}{x}")).unwrap();
        Quad::new(m(s), iri(p), o, m(g))
    }

    fn minimal(id: &str) -> RawRecord {
        RawRecord {
            item_id: Some(id.into()),
            title: "T".into(),
            theme_raw: "didone:Didone".into(),
            interpreter_raw: "Morelli Martina".into(),
            ..RawRecord::default()
        }
    }

    #[test]
    fn empty_input_gives_empty_dataset() {
        let out = build(&[]).ok().unwrap();
        assert!(out.dataset.is_empty());
        assert!(out.nanopubs.is_empty());
    }

    #[test]
    fn theme_without_sources_has_one_p67() {
        let out = build(&[minimal("7")]).ok().unwrap();
        let assertion = Iri::new(format!("{DEFAULT_BASE}assertion7")).unwrap();
        let quads: Vec<_> = out.dataset.in_graph(&assertion).collect();
        assert_eq!(quads.len(), 1);
        assert_eq!(quads[0].predicate.as_str(), ecrm::P67_REFERS_TO);
        let head = Iri::new(format!("{DEFAULT_BASE}head7")).unwrap();
        assert_eq!(out.dataset.in_graph(&head).count(), 4);
    }

    #[test]
    fn pubinfo_quads() {
        let out = build(&[minimal("284")]).ok().unwrap();
        let publisher = Iri::new(format!("{DEFAULT_BASE}person/dharc")).unwrap();
        assert!(out.dataset.contains(&q("np-284", prov::WAS_ATTRIBUTED_TO, publisher.into(), "pubInfo284")));
        let t = Literal::date_time("2020-08-24T09:00:00").unwrap();
        assert!(out.dataset.contains(&q("np-284", prov::WAS_GENERATED_AT_TIME, t.into(), "pubInfo284")));
    }

    #[test]
    fn missing_interpreter_is_rejected() {
        let reg = registry();
        let mut raw = minimal("9");
        raw.interpreter_raw.clear();
        let ctx = PrepareContext {
            registry: &reg,
            overrides: &ReferenceOverrides::default(),
            name_orders: NameOrders::default(),
        };
        let (r, _) = prepare_record(&raw, 0, &ctx);
        let mut rec = Reconciler::new(AliasTable::default(), AuthorityFixture::default());
        let mut b = GraphBuilder::new(options());
        assert!(matches!(
            b.add_record(&r, &mut rec, &reg, NameOrder::SurnameFirst),
            Err(IntegrityError::MissingInterpreter(id)) if id == "9"
        ));
    }

    #[test]
    fn duplicate_ids_are_skipped() {
        let out = build(&[minimal("1"), minimal("1")]).ok().unwrap();
        assert_eq!(out.nanopubs.len(), 1);
        let dups: Vec<_> = out.issues.iter().filter(|i| i.class == IssueClass::Duplicate).collect();
        assert_eq!(dups.len(), 1);
    }

    #[test]
    fn citation_links_its_work() {
        let mut raw = minimal("284");
        raw.classical_sources_raw = vec!["Eneide, IV, 337-396".into()];
        let out = build(&[raw]).ok().unwrap();
        let m = |x: &str| Term::Iri(Iri::new(format!("{DEFAULT_BASE}{x}")).unwrap());
        let fd = FACTUAL_GRAPH;
        assert!(out.dataset.contains(&q("cit/1", dct::IS_PART_OF, m("work/virgil-aeneis"), fd)));
        assert!(out.dataset.contains(&q("work/virgil-aeneis", rdf::TYPE, Term::Iri(iri(efrbroo::F1_WORK)), fd)));
        assert!(out.dataset.contains(&q("work/virgil-aeneis", dct::CREATOR, m("person/virgil"), fd)));
        let categ = m("categ/didone");
        assert!(out.dataset.contains(&q("work/virgil-aeneis", ecrm::P67_REFERS_TO, categ, "assertion284")));
    }

    #[test]
    fn century_time_span_quads() {
        let mut raw = minimal("284");
        raw.century_raw = "XVII secolo".into();
        let out = build(&[raw]).ok().unwrap();
        let span = "time/xvii-secolo";
        let fd = FACTUAL_GRAPH;
        let m = |x: &str| Term::Iri(Iri::new(format!("{DEFAULT_BASE}{x}")).unwrap());
        for quad in [
            q(span, rdf::TYPE, Term::Iri(iri(ecrm::E52_TIME_SPAN)), fd),
            q(span, rdfs::LABEL, Literal::string("XVII secolo").into(), fd),
            q(span, ecrm::P2_HAS_TYPE, m("type/secolo"), fd),
            q(span, crm::P82A_BEGIN_OF_THE_BEGIN, Literal::date("1600-01-01").unwrap().into(), fd),
            q(span, crm::P82B_END_OF_THE_END, Literal::date("1699-12-31").unwrap().into(), fd),
        ] {
            assert!(out.dataset.contains(&quad), "missing {quad}");
        }
    }

    use crate::normalize::NameOrder;
}
