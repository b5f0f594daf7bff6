//! Namespace and term constants.

pub mod rdf {
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const SEE_ALSO: &str = "http://www.w3.org/2000/01/rdf-schema#seeAlso";
}

pub mod xsd {
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
    pub const ANY_URI: &str = "http://www.w3.org/2001/XMLSchema#anyURI";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
}

pub mod owl {
    pub const SAME_AS: &str = "http://www.w3.org/2002/07/owl#sameAs";
}

pub mod dct {
    pub const TITLE: &str = "http://purl.org/dc/terms/title";
    pub const SUBJECT: &str = "http://purl.org/dc/terms/subject";
    pub const CREATOR: &str = "http://purl.org/dc/terms/creator";
    pub const DESCRIPTION: &str = "http://purl.org/dc/terms/description";
    pub const IS_PART_OF: &str = "http://purl.org/dc/terms/isPartOf";
}

pub mod schema {
    pub const IMAGE: &str = "http://schema.org/image";
}

pub mod ecrm {
    pub const P2_HAS_TYPE: &str = "http://erlangen-crm.org/current/P2_has_type";
    pub const P4_HAS_TIME_SPAN: &str = "http://erlangen-crm.org/current/P4_has_time-span";
    pub const P10_FALLS_WITHIN: &str = "http://erlangen-crm.org/current/P10_falls_within";
    pub const P55_HAS_CURRENT_LOCATION: &str =
        "http://erlangen-crm.org/current/P55_has_current_location";
    pub const P67_REFERS_TO: &str = "http://erlangen-crm.org/current/P67_refers_to";
    pub const P89_FALLS_WITHIN: &str = "http://erlangen-crm.org/current/P89_falls_within";
    pub const E21_PERSON: &str = "http://erlangen-crm.org/current/E21_Person";
    pub const E52_TIME_SPAN: &str = "http://erlangen-crm.org/current/E52_Time-Span";
    pub const E53_PLACE: &str = "http://erlangen-crm.org/current/E53_Place";
    pub const E55_TYPE: &str = "http://erlangen-crm.org/current/E55_Type";
}

pub mod crm {
    pub const P82A_BEGIN_OF_THE_BEGIN: &str =
        "http://www.cidoc-crm.org/cidoc-crm/P82a_begin_of_the_begin";
    pub const P82B_END_OF_THE_END: &str = "http://www.cidoc-crm.org/cidoc-crm/P82b_end_of_the_end";
}

pub mod efrbroo {
    pub const F1_WORK: &str = "http://erlangen-crm.org/efrbroo/F1_Work";
    pub const F2_EXPRESSION: &str = "http://erlangen-crm.org/efrbroo/F2_Expression";
    pub const F4_MANIFESTATION_SINGLETON: &str =
        "http://erlangen-crm.org/efrbroo/F4_Manifestation_Singleton";
    pub const R42_REPRESENTATIVE_FOR: &str =
        "http://erlangen-crm.org/efrbroo/R42_is_representative_manifestation_singleton_for";
}

pub mod hucit {
    pub const CANONICAL_CITATION: &str = "http://purl.org/net/hucit#CanonicalCitation";
    pub const HAS_CONTENT: &str = "http://purl.org/net/hucit#has_content";
}

pub mod hico {
    pub const NS: &str = "http://purl.org/emmedi/hico/";
    pub const HAS_INTERPRETATION_CRITERION: &str =
        "http://purl.org/emmedi/hico/hasInterpretationCriterion";
    pub const HAS_INTERPRETATION_TYPE: &str = "http://purl.org/emmedi/hico/hasInterpretationType";
}

pub mod prov {
    pub const NS: &str = "http://www.w3.org/ns/prov#";
    pub const WAS_GENERATED_AT_TIME: &str = "http://www.w3.org/ns/prov#wasGeneratedAtTime";
    pub const WAS_GENERATED_BY: &str = "http://www.w3.org/ns/prov#wasGeneratedBy";
    pub const WAS_ATTRIBUTED_TO: &str = "http://www.w3.org/ns/prov#wasAttributedTo";
}

pub mod np {
    pub const NANOPUBLICATION: &str = "http://www.nanopub.org/nschema#Nanopublication";
    pub const HAS_ASSERTION: &str = "http://www.nanopub.org/nschema#hasAssertion";
    pub const HAS_PROVENANCE: &str = "http://www.nanopub.org/nschema#hasProvenance";
    pub const HAS_PUBLICATION_INFO: &str = "http://www.nanopub.org/nschema#hasPublicationInfo";
}

pub mod wdt {
    pub const P625_COORDINATES: &str = "http://www.wikidata.org/prop/direct/P625";
}

/// Default base for minted IRIs.
pub const DEFAULT_BASE: &str = "https://purl.org/vpq/mythlod/data/";
