//! Bessel values and zeros against a frozen high-precision reference
//! (40-digit arbitrary-precision evaluation, rounded to 20 digits).

use hyperball::bessel::{eval_j, eval_j_prime, zero, zeros_up_to, BesselOrder, ZeroIndex};

/// (2ν, x, J_ν(x))
const VALUES: &[(u32, f64, f64)] = &[
    (0, 0.05, 0.99937509764946858081),
    (0, 0.9, 0.80752379812254476829),
    (0, 1.7, 0.3979848594461095168),
    (0, 2.6, -0.096804954397038291726),
    (0, 4.4, -0.3422567900038855424),
    (0, 7.3, 0.28821694763501439904),
    (0, 12.5, 0.14688405470042110231),
    (0, 19.0, 0.14662943965965120426),
    (0, 27.7, -0.03108904352907251784),
    (0, 41.3, -0.11748683076135627082),
    (0, 58.0, 0.082520532185846837941),
    (0, 77.7, 0.005068664664995793793),
    (0, 103.1, -0.016505747038900016553),
    (0, 160.4, -0.05173094243504112937),
    (0, 255.5, -0.04842456345703782595),
    (0, 404.0, 0.018343689899840822112),
    (0, 640.2, 0.0031576318433703767771),
    (0, 999.9, 0.025134918974209743591),
    (1, 0.05, 0.17833808240219742789),
    (1, 0.9, 0.65881253368488338706),
    (1, 1.7, 0.60684880800761794398),
    (1, 2.6, 0.2550839966235550243),
    (1, 4.4, -0.36196710397186399136),
    (1, 7.3, 0.25114271474902147417),
    (1, 12.5, -0.014967249458668382989),
    (1, 19.0, 0.027434614372855057217),
    (1, 27.7, 0.08236077648156136833),
    (1, 41.3, -0.055040092818617231094),
    (1, 58.0, 0.10402066155833098206),
    (1, 77.7, 0.06739167095216587833),
    (1, 103.1, 0.042573220488662655044),
    (1, 160.4, -0.011202837022905803076),
    (1, 255.5, -0.042818962409540506099),
    (1, 404.0, 0.037860035041160217613),
    (1, 640.2, -0.019948446429983919003),
    (1, 999.9, 0.01934341117706639684),
    (2, 0.05, 0.024992188313759700519),
    (2, 0.9, 0.40594954607880568252),
    (2, 1.7, 0.57776523152902321722),
    (2, 2.6, 0.47081826651757864505),
    (2, 4.4, -0.20277552192308669992),
    (2, 7.3, 0.082570430493257831051),
    (2, 12.5, -0.16548380461475971846),
    (2, 19.0, -0.1057014311424092668),
    (2, 27.7, 0.14782888935541772197),
    (2, 41.3, 0.03870856337882626129),
    (2, 58.0, 0.065259503511769029913),
    (2, 77.7, 0.090408396777184832059),
    (2, 103.1, 0.076747072661238496477),
    (2, 160.4, 0.035795025547646638374),
    (2, 255.5, -0.012207565402962924752),
    (2, 404.0, 0.035226413265742392908),
    (2, 640.2, -0.03137327769255220611),
    (2, 999.9, 0.0022304980404026312048),
    (3, 0.05, 0.0029727968749101473849),
    (3, 0.9, 0.20921248399799267453),
    (3, 1.7, 0.43581621392440200091),
    (3, 2.6, 0.5221209194857084703),
    (3, 4.4, 0.034636962694586840165),
    (3, 7.3, -0.12095301097363061029),
    (3, 12.5, -0.22637633819446598575),
    (3, 19.0, -0.17953575616051180387),
    (3, 27.7, 0.13025004228845318451),
    (3, 41.3, 0.10995572151893614517),
    (3, 58.0, -0.010692730322201048739),
    (3, 77.7, 0.061296359051308197595),
    (3, 103.1, 0.066460644803584655799),
    (3, 160.4, 0.061925702215878266599),
    (3, 255.5, 0.025487799864128110599),
    (3, 404.0, 0.012027248161115695124),
    (3, 640.2, -0.024453836200774213472),
    (3, 999.9, -0.016182996606814710558),
    (5, 0.05, 0.000029730092411405303417),
    (5, 0.9, 0.038562412975092177506),
    (5, 1.7, 0.16223862832956207772),
    (5, 2.6, 0.34736321816764703623),
    (5, 4.4, 0.38558321489999138047),
    (5, 7.3, -0.30084943158749980838),
    (5, 12.5, -0.03936307170800345359),
    (5, 19.0, -0.055782365345567447301),
    (5, 27.7, -0.068254273706638640404),
    (5, 41.3, 0.063027191234036322092),
    (5, 58.0, -0.10457373381637586389),
    (5, 77.7, -0.065025016162540079281),
    (5, 103.1, -0.04063935109573584633),
    (5, 160.4, 0.012361048410983326725),
    (5, 255.5, 0.043118232075264123836),
    (5, 404.0, -0.037770723792439061461),
    (5, 640.2, 0.019833854882651331319),
    (5, 999.9, -0.019391965022271361469),
    (7, 0.05, 2.1236623038279168607e-7),
    (7, 0.9, 0.0050231436414083063274),
    (7, 1.7, 0.041356222339015887196),
    (7, 2.6, 0.14588526929822811502),
    (7, 4.4, 0.40352578150994878408),
    (7, 7.3, -0.08510824353835556485),
    (7, 12.5, 0.21063110951126460431),
    (7, 19.0, 0.16485618633273089669),
    (7, 27.7, -0.14257030830048182028),
    (7, 41.3, -0.10232531095791479814),
    (7, 58.0, 0.0016777532690651984034),
    (7, 77.7, -0.065480723025731625967),
    (7, 103.1, -0.06843151537078814021),
    (7, 160.4, -0.061540382751695494582),
    (7, 255.5, -0.024643998845042707001),
    (7, 404.0, -0.012494707613992416181),
    (7, 640.2, 0.024608739784674958004),
    (7, 999.9, 0.016086027084751147392),
    (9, 0.05, 1.1798421855309833641e-9),
    (9, 0.9, 0.00050648201363909296534),
    (9, 1.7, 0.0080516989487386387136),
    (9, 2.6, 0.045404814558351721564),
    (9, 4.4, 0.25638961932038163328),
    (9, 7.3, 0.21923878709866570311),
    (9, 12.5, 0.157316493034311632),
    (9, 19.0, 0.11651885504709988292),
    (9, 27.7, 0.032225675941173919555),
    (9, 41.3, -0.080370464277750695851),
    (9, 58.0, 0.10477622127988373267),
    (9, 77.7, 0.059125851925987680761),
    (9, 103.1, 0.035993176434285632868),
    (9, 160.4, -0.015046725962491234747),
    (9, 255.5, -0.043793410125813239096),
    (9, 404.0, 0.037554231333780777022),
    (9, 640.2, -0.01956478087688325151),
    (9, 999.9, 0.019504578473209713339),
    (11, 0.05, 5.3630127853076770833e-12),
    (11, 0.9, 0.000041676494982623201045),
    (11, 1.7, 0.0012704191543063188715),
    (11, 2.6, 0.011285242634527838868),
    (11, 4.4, 0.12090753073628633255),
    (11, 7.3, 0.35540263859150506841),
    (11, 12.5, -0.097363234526560229268),
    (11, 19.0, -0.10966304446831516267),
    (11, 27.7, 0.15304074452685601823),
    (11, 41.3, 0.084811166200051449172),
    (11, 58.0, 0.014580625895054691148),
    (11, 77.7, 0.07232927730287305592),
    (11, 103.1, 0.071573499734595809596),
    (11, 160.4, 0.060696115085470924084),
    (11, 255.5, 0.023101373830826193687),
    (11, 404.0, 0.01333131177736872062),
    (11, 640.2, -0.024883783564574909974),
    (11, 999.9, -0.015910468322616046458),
    (14, 0.05, 1.2109203976980754143e-15),
    (14, 0.9, 7.2285047291103634154e-7),
    (14, 1.7, 0.000058087210824311718043),
    (14, 2.6, 0.0010053562948738085709),
    (14, 4.4, 0.026433279643342270065),
    (14, 7.3, 0.26430025130148603813),
    (14, 12.5, -0.22517790045972311055),
    (14, 19.0, -0.11647797453873988753),
    (14, 27.7, -0.070565391917007248117),
    (14, 41.3, 0.032793487879943738521),
    (14, 58.0, -0.093065045256334326831),
    (14, 77.7, -0.087664296917544359375),
    (14, 103.1, -0.070860811450423929954),
    (14, 160.4, -0.027678622542470460796),
    (14, 255.5, 0.01669684985435157421),
    (14, 404.0, -0.036253457860656686703),
    (14, 640.2, 0.031232882832883118966),
    (14, 999.9, -0.0028331056621661937985),
    (21, 0.05, 1.2671282747986545195e-24),
    (21, 0.9, 1.8860479652692530952e-11),
    (21, 1.7, 1.4322498766290166389e-8),
    (21, 2.6, 1.1393998793177883574e-6),
    (21, 4.4, 0.00021573388756737088149),
    (21, 7.3, 0.019904598571656861845),
    (21, 12.5, 0.29651071433853325836),
    (21, 19.0, -0.0043259848620710220033),
    (21, 27.7, 0.15610045754535974212),
    (21, 41.3, 0.12299845566463108204),
    (21, 58.0, -0.071195414394171723258),
    (21, 77.7, -0.011873337991667867377),
    (21, 103.1, -0.0030449569454211862838),
    (21, 160.4, 0.031434341431728118327),
    (21, 255.5, 0.047331239400452511231),
    (21, 404.0, -0.035896058571425420847),
    (21, 640.2, 0.017780433286631843723),
    (21, 999.9, -0.020205487368716890049),
    (40, 0.05, 3.7382008432979655987e-51),
    (40, 0.9, 4.7199445947241899823e-26),
    (40, 1.7, 1.5392189177224386682e-20),
    (40, 2.6, 7.2065572205474236555e-17),
    (40, 4.4, 2.2998685893911088973e-12),
    (40, 7.3, 3.8026628466865908758e-8),
    (40, 12.5, 0.00048433775975865439337),
    (40, 19.0, 0.11164834708850506713),
    (40, 27.7, -0.18153092522838714075),
    (40, 41.3, 0.013116547135169453378),
    (40, 58.0, -0.057944166894090960052),
    (40, 77.7, -0.052701859754227328182),
    (40, 103.1, -0.066067083455302480561),
    (40, 160.4, -0.05068924190586391089),
    (40, 255.5, -0.025811136585039344695),
    (40, 404.0, -0.0005872664832663553102),
    (40, 640.2, 0.012651800581655806103),
    (40, 999.9, 0.024195489542468534362),
    (61, 0.05, 9.3233467629175935085e-83),
    (61, 0.9, 1.7889561296110486125e-44),
    (61, 1.7, 4.6743659197167453571e-36),
    (61, 2.6, 1.9246994325482245019e-30),
    (61, 4.4, 1.6196215644951105045e-23),
    (61, 7.3, 6.2726032759110368978e-17),
    (61, 12.5, 3.6088752333944433008e-10),
    (61, 19.0, 0.000022201675435110120216),
    (61, 27.7, 0.045710048622068752459),
    (61, 41.3, -0.034861976912235109142),
    (61, 58.0, 0.027460450448139870417),
    (61, 77.7, -0.082261547746467802544),
    (61, 103.1, -0.059305758367400104281),
    (61, 160.4, 0.0034981729945311937435),
    (61, 255.5, 0.01425210975221420254),
    (61, 404.0, -0.0045188046738700884422),
    (61, 640.2, -0.0013112680759304904057),
    (61, 999.9, -0.024561249336701498429),
    (100, 0.05, 2.5937029673520467957e-145),
    (100, 0.9, 1.4990853013538899837e-82),
    (100, 1.7, 9.5877802095678069064e-69),
    (100, 2.6, 1.5837871923408953651e-59),
    (100, 4.4, 3.9519011309508830133e-48),
    (100, 7.3, 3.2948277320896556697e-37),
    (100, 12.5, 9.4577519589053244053e-26),
    (100, 19.0, 4.1771170794780486407e-17),
    (100, 27.7, 7.7696006925185889351e-10),
    (100, 41.3, 0.0017794526282476822128),
    (100, 58.0, -0.062611047585498607302),
    (100, 77.7, -0.084819907911474164015),
    (100, 103.1, 0.0020954794547231567435),
    (100, 160.4, 0.036680782998438841435),
    (100, 255.5, 0.021508267018499127493),
    (100, 404.0, 0.019936615262728852724),
    (100, 640.2, -0.02796946238723337894),
    (100, 999.9, -0.0058150064564343610873),
    (201, 0.9, 1.4974913614959204844e-194),
    (201, 1.7, 8.5483770516660013562e-167),
    (201, 2.6, 2.9678938145147864274e-148),
    (201, 4.4, 2.6371724930328626627e-125),
    (201, 7.3, 3.0322544518566475337e-103),
    (201, 12.5, 7.0284629009971411879e-80),
    (201, 19.0, 7.9752200301441862244e-62),
    (201, 27.7, 8.2329410863742866738e-46),
    (201, 41.3, 2.0591785892770734562e-29),
    (201, 58.0, 1.7264019971980963797e-16),
    (201, 77.7, 5.1281932449503953471e-7),
    (201, 103.1, 0.13773471716054060389),
    (201, 160.4, -0.070591650419661760742),
    (201, 255.5, -0.041657204932046935796),
    (201, 404.0, 0.038478239549399495512),
    (201, 640.2, 0.02555721695343805385),
    (201, 999.9, -0.0087900968125717465171),
    (400, 12.5, 1.565571984313837682e-216),
    (400, 19.0, 2.8354021854330983979e-180),
    (400, 27.7, 9.4976430977077454483e-148),
    (400, 41.3, 1.448296923630105247e-113),
    (400, 58.0, 5.5748210281251379192e-85),
    (400, 77.7, 4.5325279831666130692e-61),
    (400, 103.1, 3.9859659230963248972e-39),
    (400, 160.4, 3.979594808349303651e-10),
    (400, 255.5, 0.019419099136607688526),
    (400, 404.0, 0.0062106144350149066761),
    (400, 640.2, 0.0059966555313890412164),
    (400, 999.9, 0.0066235136920343521532),
    (801, 77.7, 6.3522794693604713522e-236),
    (801, 103.1, 5.5094117953616286122e-188),
    (801, 160.4, 2.5715236215510091854e-115),
    (801, 255.5, 6.253294556020828006e-46),
    (801, 404.0, 0.08433469695564468259),
    (801, 640.2, -0.015707769703723220849),
    (801, 999.9, 0.013282483121050546501),
    (1600, 404.0, 3.1635120155441115633e-156),
    (1600, 640.2, 9.1721724571629036232e-35),
    (1600, 999.9, -0.029043808058035552675),
];

/// (2ν, s, j_{ν,s})
const ZEROS: &[(u32, u32, f64)] = &[
    (0, 1, 2.4048255576957727686),
    (0, 50, 156.29503426853352382),
    (0, 150, 470.45376557536983843),
    (1, 1, 3.1415926535897932385),
    (1, 100, 314.15926535897932385),
    (20, 1, 14.475500686554541238),
    (20, 2, 18.433463666966582642),
    (20, 37, 130.77995306227889072),
    (61, 1, 36.628378589713436836),
    (61, 3, 46.018038766364359562),
    (61, 80, 296.88365942911454448),
    (200, 1, 108.83616589840977436),
    (200, 2, 115.73935123918876152),
    (200, 5, 131.82393465391846297),
    (200, 60, 329.49572054389577527),
    (401, 1, 211.53805588885715699),
    (401, 4, 233.51153804003222971),
    (401, 30, 349.05511848046826778),
    (1000, 1, 514.85931169049397633),
    (1000, 2, 526.15018857053328366),
    (1000, 10, 584.72652471416943006),
];

#[test]
fn values_match_reference() {
    let mut worst = 0.0_f64;
    for &(twice, x, want) in VALUES {
        let got = eval_j(BesselOrder::from_twice(twice), x).unwrap();
        let err = (got - want).abs() / want.abs().max(1e-2);
        worst = worst.max(err);
        assert!(err <= 1e-13, "2ν={twice} x={x}: got {got:e}, want {want:e}");
    }
    println!("worst scaled error {worst:e}");
}

#[test]
fn zeros_match_reference() {
    for &(twice, s, want) in ZEROS {
        let got = zero(BesselOrder::from_twice(twice), ZeroIndex::new(s).unwrap()).unwrap();
        // the representable spacing near 500 is already ~1e-13
        let tol = 1e-12_f64.max(4.0 * f64::EPSILON * want);
        assert!((got - want).abs() <= tol, "2ν={twice} s={s}: {got} vs {want}");
    }
}

#[test]
fn zeros_up_to_agrees_with_indexed_zero() {
    for &(twice, s, want) in ZEROS.iter().filter(|z| z.1 > 1) {
        let order = BesselOrder::from_twice(twice);
        let all = zeros_up_to(order, want + 0.1).unwrap();
        assert_eq!(all.len(), s as usize, "2ν={twice}");
        let last = *all.last().unwrap();
        assert_eq!(last, zero(order, ZeroIndex::new(s).unwrap()).unwrap());
    }
}

#[test]
fn derivative_matches_central_difference() {
    // deterministic pseudo-random sample, ν ≤ 15/2, x ∈ [0.5, 50]
    let mut state = 0x2545_f491_4f6c_dd1d_u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..100 {
        let twice = (next() * 16.0) as u32;
        let x = 0.5 + 49.5 * next();
        let order = BesselOrder::from_twice(twice);
        let h = 1e-6 * x;
        let fd = (eval_j(order, x + h).unwrap() - eval_j(order, x - h).unwrap()) / (2.0 * h);
        let d = eval_j_prime(order, x).unwrap();
        assert!((d - fd).abs() <= 1e-6, "2ν={twice} x={x}: {d} vs {fd}");
    }
}
