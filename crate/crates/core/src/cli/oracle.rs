//! Reference values computed with 30-digit arithmetic (mpmath).

/// `(t, Z(t))` at `t = 10 * 500^(i/49) + 0.123 i`, `i = 0..50`.
pub const HARDY_Z: [(f64, f64); 50] = [
    (10.0, -1.5491945461810224),
    (11.475225791695506, -1.4134171920246055),
    (13.133303042563666, -0.71135261903917875),
    (14.998957398518722, 0.7190546327192761),
    (17.100257971087072, 2.1837021665047388),
    (19.469069449450714, 1.6509213065500646),
    (22.141565348247268, -1.0921031059616659),
    (25.158810658061284, 0.20651491854109121),
    (28.567423283417727, 2.4738581999672389),
    (32.420324922126906, -0.59472340534441537),
    (36.777593480471073, 1.568320745847519),
    (41.707430754171074, 0.94491516454745067),
    (47.28726096166912, -1.3858018892317176),
    (53.604977823915365, 1.5319593614323666),
    (60.760360277499654, 0.11288117571676083),
    (68.866679624164303, -1.2314656441756852),
    (78.052524003219117, -1.2404351832298816),
    (88.463869573821987, -0.56939802932898857),
    (100.2664317678694, 2.5972617935018812),
    (113.64833448536708, 1.4673179351790984),
    (128.82314022528296, -1.7126338619134585),
    (146.03328995850931, 0.10320499923132476),
    (165.55400814931882, 0.057122453577014291),
    (187.69773582389371, 1.4938108373865883),
    (212.81916308981491, -1.0840756246969555),
    (241.32094216581639, 0.78942828479837404),
    (273.66017294215768, -1.0008407081643678),
    (310.35576553519728, -0.64820231976037965),
    (351.9967984255849, 0.4867863690568307),
    (399.25200680545697, 4.1820226823778604),
    (452.88055396441205, 6.3867295921366258),
    (513.74425921007905, -0.27231861733295885),
    (582.82147927964259, -1.4606160928967292),
    (661.22286683163731, -2.5904342883299895),
    (750.2092598416464, -1.740557016785415),
    (851.21199004822633, 4.4953247913622129),
    (965.85593755926842, 0.83719608666437194),
    (1095.9857029616943, 1.5981051527409988),
    (1243.695318491327, -0.45671063788773578),
    (1411.3619768237815, 0.32685760326905845),
    (1601.6843207594524, -1.4287044496471674),
    (1817.7259105384611, -0.064930876099211206),
    (2062.9645689180396, 0.59477768294215305),
    (2341.3483988185471, 0.069526265596614934),
    (2657.3593758200609, 1.1447670332096717),
    (3016.085539800371, -0.90198823199716906),
    (3423.30294851246, 0.32536706544942271),
    (3885.5687131361009, 1.2321305935749393),
    (4410.3266143366969, 0.78089750475725785),
    (5006.027, -0.56123865373283195),
];

/// First three ordinates of zeros on the critical line.
pub const FIRST_ZEROS: [f64; 3] = [14.134_725_141_734_694, 21.022_039_638_771_555, 25.010_857_580_145_689];

/// Number of zeros with ordinate in `(10, 100)`.
pub const ZEROS_10_TO_100: usize = 29;

/// `(T, int_0^T Z^2)`.
pub const HL_INTEGRAL: [(f64, f64); 2] = [(20.0, 33.439_252_978_211_719), (100.0, 295.635_099_054_719_13)];
