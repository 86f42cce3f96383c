//! Deterministic synthetic corpora with matching noisy hypotheses.

use neogate_core::corpus::{Anchor, Kind, Number};
use neogate_core::{Corpus, Entry, TagsetDefinition, TagsetMapping, Triplet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NOUNS: [[&str; 5]; 6] = [
    ["amic", "amico", "amica", "amici", "amiche"],
    ["student", "studente", "studentessa", "studenti", "studentesse"],
    ["cugin", "cugino", "cugina", "cugini", "cugine"],
    ["maestr", "maestro", "maestra", "maestri", "maestre"],
    ["ragazz", "ragazzo", "ragazza", "ragazzi", "ragazze"],
    ["avvocat", "avvocato", "avvocata", "avvocati", "avvocate"],
];
const ADJECTIVES: [[&str; 5]; 2] = [
    ["stanc", "stanco", "stanca", "stanchi", "stanche"],
    ["content", "contento", "contenta", "contenti", "contente"],
];
const FILLERS: [&str; 8] = ["oggi", "ha", "visto", "e", "poi", "sempre", "qui", "ieri"];

/// A hypothesis word; `'*'` in `text` stands for the marker of `number`.
#[derive(Debug, Clone)]
pub struct HypWord {
    pub text: String,
    pub number: Number,
}

pub fn render(words: &[HypWord], marker: impl Fn(Number) -> char) -> String {
    words
        .iter()
        .map(|w| w.text.replace('*', &marker(w.number).to_string()))
        .collect::<Vec<_>>()
        .join(" ")
}

struct Builder {
    tagged: Vec<String>,
    masc: Vec<String>,
    fem: Vec<String>,
    triplets: Vec<Triplet>,
    hyp: Vec<HypWord>,
}

impl Builder {
    fn plain(&mut self, w: &str) {
        for v in [&mut self.tagged, &mut self.masc, &mut self.fem] {
            v.push(w.to_string());
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn gendered(&mut self, masc: &str, fem: &str, tagged: String, tag: &str, kind: Kind, number: Number, anchor: Option<Anchor>) {
        self.tagged.push(tagged.clone());
        self.masc.push(masc.to_string());
        self.fem.push(fem.to_string());
        self.triplets.push(Triplet {
            masc: masc.to_string(),
            fem: fem.to_string(),
            tagged,
            tag: tag.to_string(),
            kind,
            number,
            anchor,
        });
    }
}

fn hyp_for(rng: &mut ChaCha8Rng, b: &mut Builder, neo: &str, masc: &str, fem: &str, number: Number) {
    let text = match rng.gen_range(0..10) {
        0..=4 => neo.to_string(),
        5 | 6 => masc.to_string(),
        7 => fem.to_string(),
        _ => return,
    };
    b.hyp.push(HypWord { text, number });
}

/// `n` entries and one hypothesis per entry, all from `seed`.
pub fn corpus(n: usize, seed: u64) -> (Corpus, Vec<Vec<HypWord>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tagset = TagsetDefinition::neo_gate();
    let ast = TagsetMapping::asterisk();
    let mut entries = Vec::with_capacity(n);
    let mut hyps = Vec::with_capacity(n);
    for i in 0..n {
        let mut b = Builder {
            tagged: vec![],
            masc: vec![],
            fem: vec![],
            triplets: vec![],
            hyp: vec![],
        };
        for _ in 0..rng.gen_range(1..=3) {
            let f = *FILLERS.choose(&mut rng).unwrap();
            b.plain(f);
            b.hyp.push(HypWord {
                text: if rng.gen_bool(0.15) { format!("{}*", &f[..f.len() - 1]) } else { f.to_string() },
                number: if rng.gen_bool(0.5) { Number::Singular } else { Number::Plural },
            });
            let number = if rng.gen_bool(0.5) { Number::Singular } else { Number::Plural };
            let noun = NOUNS.choose(&mut rng).unwrap();
            let (nm, nf) = match number {
                Number::Singular => (noun[1], noun[2]),
                Number::Plural => (noun[3], noun[4]),
            };
            let mut function: Vec<(&str, &str, &str)> = Vec::new();
            match (number, rng.gen_range(0..3)) {
                (Number::Singular, 0) => function.push(("DARTS", if noun[0] == "student" { "lo" } else { "il" }, "la")),
                (Number::Singular, 1) => function.push(("IART", "un", "una")),
                (Number::Plural, 0) => function.push(("DARTP", "i", "le")),
                (Number::Plural, 1) => {
                    function.push(("DARTP", "i", "le"));
                    function.push(("POSS1P", "miei", "mie"));
                }
                _ => {}
            }
            let k = function.len();
            for (j, (tag, m, f)) in function.into_iter().enumerate() {
                let neo = ast.replacement(tag).unwrap();
                let def = tagset.get(tag).unwrap();
                let anchor = Anchor {
                    text: noun[0].to_string(),
                    distance: (k - j) as u32,
                };
                b.gendered(m, f, format!("<{tag}>"), tag, Kind::Function, def.number, Some(anchor));
                hyp_for(&mut rng, &mut b, neo, m, f, def.number);
            }
            let suffix = match number {
                Number::Singular => "ENDS",
                Number::Plural => "ENDP",
            };
            b.gendered(nm, nf, format!("{}<{suffix}>", noun[0]), suffix, Kind::Content, number, None);
            hyp_for(&mut rng, &mut b, &format!("{}*", noun[0]), nm, nf, number);
            if rng.gen_bool(0.3) {
                let adj = ADJECTIVES.choose(&mut rng).unwrap();
                let (am, af) = match number {
                    Number::Singular => (adj[1], adj[2]),
                    Number::Plural => (adj[3], adj[4]),
                };
                b.gendered(am, af, format!("{}<{suffix}>", adj[0]), suffix, Kind::Content, number, None);
                hyp_for(&mut rng, &mut b, &format!("{}*", adj[0]), am, af, number);
            }
        }
        b.plain(".");
        b.hyp.push(HypWord {
            text: ".".into(),
            number: Number::Singular,
        });
        entries.push(Entry {
            id: format!("s{i:04}"),
            source: format!("synthetic sentence {i}"),
            ref_masc: b.masc.join(" "),
            ref_fem: b.fem.join(" "),
            ref_tagged: b.tagged.join(" "),
            triplets: b.triplets,
        });
        hyps.push(b.hyp);
    }
    (Corpus::new(entries), hyps)
}
