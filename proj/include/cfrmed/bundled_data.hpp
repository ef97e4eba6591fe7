#pragma once

#include <string_view>
#include <vector>

// Curated age-stratified case/fatality tables embedded as canonical cohort
// files. CFRMED_DATA_DIR can override any of them per file at load time.

namespace cfrmed::bundled {

struct File {
    std::string_view path;
    std::string_view content;
};

struct Dataset {
    std::string_view name;
    std::vector<std::string_view> files;
};

inline constexpr std::string_view k_argentina = R"DATA(#cohort,Argentina,2020-05-28,argentina
source: Ministerio de Salud Argentina daily situation report (citation key: argentina)
band,cases,deaths
0-9,1002,0
10-19,1080,1
20-29,2813,1
30-39,3142,9
40-49,2508,24
50-59,1812,54
60-69,1005,101
70-79,651,123
80+,662,194
total,14675,507
)DATA";

inline constexpr std::string_view k_china = R"DATA(#cohort,China,2020-02-17,wu2020characteristics
source: Chinese Center for Disease Control and Prevention (citation key: wu2020characteristics)
band,cases,deaths
0-9,416,0
10-19,549,1
20-29,3619,7
30-39,7600,18
40-49,8571,38
50-59,10008,130
60-69,8583,309
70-79,3918,312
80+,1408,208
total,44672,1023
)DATA";

inline constexpr std::string_view k_colombia = R"DATA(#cohort,Colombia,2020-05-28,colombia
source: Instituto Nacional de Salud Colombia (citation key: colombia)
band,cases,deaths
0-9,1105,5
10-19,1950,1
20-29,5614,13
30-39,5615,24
40-49,4033,61
50-59,3286,121
60-69,1961,192
70-79,1117,214
80+,685,191
total,25366,822
)DATA";

inline constexpr std::string_view k_diamond_princess = R"DATA(#cohort,Diamond Princess,2020-03-26,russell2020estimating
source: Russell et al. 2020 Eurosurveillance 25(12) (citation key: russell2020estimating)
band,cases,deaths
0-9,1,0
10-19,5,0
20-29,28,0
30-39,34,0
40-49,27,0
50-59,59,0
60-69,177,0
70-79,234,3
80+,54,4
total,619,7
)DATA";

inline constexpr std::string_view k_italy = R"DATA(#cohort,Italy,2020-05-26,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1919,4
10-19,3442,0
20-29,12933,12
30-39,17934,62
40-49,29942,273
50-59,41435,1109
60-69,30880,3259
70-79,33141,8562
80+,59134,18395
total,230760,31676
)DATA";

inline constexpr std::string_view k_netherlands = R"DATA(#cohort,Netherlands,2020-05-28,netherlands
source: RIVM epidemiological situation report (citation key: netherlands)
band,cases,deaths
0-9,128,0
10-19,587,1
20-29,4336,3
30-39,4093,10
40-49,5269,28
50-59,8437,142
60-69,5949,484
70-79,6229,1596
80+,10919,3639
total,45947,5903
)DATA";

inline constexpr std::string_view k_portugal = R"DATA(#cohort,Portugal,2020-05-28,portugal
source: Direcao-Geral da Saude situation report (citation key: portugal)
band,cases,deaths
0-9,626,0
10-19,1052,0
20-29,4114,1
30-39,4736,1
40-49,5315,15
50-59,5253,42
60-69,3484,122
70-79,2537,269
80+,4479,919
total,31596,1369
)DATA";

inline constexpr std::string_view k_south_africa = R"DATA(#cohort,South Africa,2020-05-28,southafrica
source: National Institute for Communicable Diseases South Africa (citation key: southafrica)
band,cases,deaths
0-9,755,2
10-19,1147,1
20-29,5319,4
30-39,7720,33
40-49,5754,61
50-59,3753,144
60-69,1663,153
70-79,754,113
80+,415,66
total,27280,577
)DATA";

inline constexpr std::string_view k_south_korea = R"DATA(#cohort,South Korea,2020-05-25,southkorea
source: Korea Centers for Disease Control and Prevention (citation key: southkorea)
band,cases,deaths
0-9,149,0
10-19,636,0
20-29,3117,0
30-39,1235,2
40-49,1481,3
50-59,1987,15
60-69,1375,39
70-79,719,78
80+,491,129
total,11190,266
)DATA";

inline constexpr std::string_view k_spain = R"DATA(#cohort,Spain,2020-05-29,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,1123,3
10-19,2068,5
20-29,15272,24
30-39,24902,65
40-49,37970,218
50-59,45750,663
60-69,36355,1825
70-79,34294,4896
80+,61026,12886
total,258760,20585
)DATA";

inline constexpr std::string_view k_sweden = R"DATA(#cohort,Sweden,2020-05-18,sweden
source: Folkhalsomyndigheten Sweden (citation key: sweden)
band,cases,deaths
0-9,168,1
10-19,401,0
20-29,3104,8
30-39,4051,12
40-49,4962,39
50-59,6190,129
60-69,4186,294
70-79,3888,909
80+,7482,2733
total,34432,4125
)DATA";

inline constexpr std::string_view k_switzerland = R"DATA(#cohort,Switzerland,2020-05-26,switzerland
source: Federal Office of Public Health Switzerland (citation key: switzerland)
band,cases,deaths
0-9,162,0
10-19,877,0
20-29,3844,0
30-39,4136,5
40-49,4809,4
50-59,6232,37
60-69,3671,121
70-79,2896,335
80+,4080,1146
total,30707,1648
)DATA";

inline constexpr std::string_view k_italy_march9 = R"DATA(#cohort,Italy,2020-03-09,iss9march
source: Istituto Superiore di Sanita report of 9 March 2020 (citation key: iss9march)
band,cases,deaths
0-9,43,0
10-19,85,0
20-29,296,0
30-39,470,0
40-49,891,1
50-59,1453,3
60-69,1471,37
70-79,1785,114
80+,1532,202
total,8026,357
)DATA";

// Comparison-table variant of the Chinese data with an empty 0-9 band; kept so
// the undefined-rate path runs against real counts. No declared total: the
// table total reflects the 416-case variant.
inline constexpr std::string_view k_china_00_variant = R"DATA(#cohort,China (0/0 variant),2020-02-17,wu2020characteristics
source: Chinese Center for Disease Control and Prevention comparison-table variant with an empty 0-9 band (citation key: wu2020characteristics)
band,cases,deaths
0-9,0,0
10-19,549,1
20-29,3619,7
30-39,7600,18
40-49,8571,38
50-59,10008,130
60-69,8583,309
70-79,3918,312
80+,1408,208
)DATA";

inline constexpr std::string_view k_lombardy_pre = R"DATA(#cohort,Lombardy before 16 March,2020-03-15,poletti2020age
source: Poletti et al. 2020 contact-tracing and serosurvey infection data for Lombardy (citation key: poletti2020age)
band,cases,deaths
0-19,114,0
20-49,438,0
50-59,354,2
60-69,259,4
70-79,189,15
80+,69,21
)DATA";

inline constexpr std::string_view k_lombardy_post = R"DATA(#cohort,Lombardy after 16 March,2020-04-16,poletti2020age
source: Poletti et al. 2020 contact-tracing and serosurvey infection data for Lombardy (citation key: poletti2020age)
band,cases,deaths
0-19,188,0
20-49,431,0
50-59,283,1
60-69,227,2
70-79,143,8
80+,86,7
)DATA";

inline constexpr std::string_view k_italy_series = R"DATA(#series,Italy
#cohort,Italy,2020-03-09,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,43,0
10-19,85,0
20-29,296,0
30-39,470,0
40-49,891,1
50-59,1453,3
60-69,1471,37
70-79,1785,114
80+,1532,202
total,8026,357
#cohort,Italy,2020-03-12,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,63,0
10-19,118,0
20-29,511,0
30-39,819,1
40-49,1523,1
50-59,2480,14
60-69,2421,65
70-79,2849,274
80+,2533,430
total,13317,785
#cohort,Italy,2020-03-19,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,205,0
10-19,270,0
20-29,1374,0
30-39,2525,9
40-49,4396,25
50-59,6834,83
60-69,6337,312
70-79,7121,1090
80+,6467,1528
total,35529,3047
#cohort,Italy,2020-03-23,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,318,0
10-19,386,0
20-29,2192,0
30-39,3995,12
40-49,7267,41
50-59,11280,168
60-69,10423,541
70-79,11320,1768
80+,10514,2488
total,57695,5018
#cohort,Italy,2020-03-26,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,428,0
10-19,512,0
20-29,2778,0
30-39,5033,17
40-49,9295,67
50-59,14508,243
60-69,13243,761
70-79,14198,2403
80+,13539,3310
total,73534,6801
#cohort,Italy,2020-04-02,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,693,0
10-19,931,0
20-29,4530,6
30-39,7466,29
40-49,13701,110
50-59,20975,479
60-69,18089,1448
70-79,19238,4196
80+,20608,6280
total,106231,12548
#cohort,Italy,2020-04-09,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,938,1
10-19,1432,0
20-29,6360,7
30-39,9956,36
40-49,17745,153
50-59,26391,638
60-69,21734,1957
70-79,22934,5366
80+,28478,8495
total,135968,16653
#cohort,Italy,2020-04-16,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1123,1
10-19,1804,0
20-29,7737,7
30-39,11686,40
40-49,20519,178
50-59,29858,756
60-69,24040,2284
70-79,25717,6203
80+,36519,10525
total,159003,19994
#cohort,Italy,2020-04-23,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1304,2
10-19,2146,0
20-29,8963,7
30-39,13137,48
40-49,22767,203
50-59,32524,861
60-69,25707,2576
70-79,27615,6882
80+,42862,12609
total,177025,23118
#cohort,Italy,2020-04-28,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1478,2
10-19,2511,0
20-29,10377,8
30-39,14907,49
40-49,25644,224
50-59,35986,918
60-69,27880,2727
70-79,30158,7291
80+,50448,13996
total,199389,25215
#cohort,Italy,2020-05-07,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1642,3
10-19,2908,0
20-29,11457,9
30-39,16189,54
40-49,27553,246
50-59,38399,993
60-69,29252,2976
70-79,31627,7849
80+,55020,15825
total,214047,27955
#cohort,Italy,2020-05-14,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1774,3
10-19,3148,0
20-29,12115,12
30-39,16981,59
40-49,28627,258
50-59,39822,1063
60-69,30010,3127
70-79,32353,8221
80+,57192,16948
total,222022,29691
#cohort,Italy,2020-05-20,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1851,4
10-19,3312,0
20-29,12599,14
30-39,17528,61
40-49,29390,268
50-59,40803,1101
60-69,30466,3219
70-79,32824,8447
80+,58380,17903
total,227153,31017
#cohort,Italy,2020-05-26,italy
source: Istituto Superiore di Sanita integrated surveillance bulletin (citation key: italy)
band,cases,deaths
0-9,1919,4
10-19,3442,0
20-29,12933,12
30-39,17934,62
40-49,29942,273
50-59,41435,1109
60-69,30880,3259
70-79,33141,8562
80+,59134,18395
total,230760,31676
)DATA";

inline constexpr std::string_view k_spain_series = R"DATA(#series,Spain
#cohort,Spain,2020-03-22,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,129,0
10-19,221,1
20-29,1285,4
30-39,2208,3
40-49,2919,9
50-59,3129,20
60-69,2916,63
70-79,3132,164
80+,3020,541
total,18959,805
#cohort,Spain,2020-03-26,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,175,0
10-19,302,1
20-29,1932,4
30-39,3454,7
40-49,5045,19
50-59,5749,35
60-69,5397,114
70-79,5377,303
80+,5385,843
total,32816,1326
#cohort,Spain,2020-03-30,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,212,0
10-19,368,1
20-29,2883,6
30-39,5351,10
40-49,7965,36
50-59,9390,78
60-69,8744,232
70-79,8625,759
80+,8088,1662
total,51626,2784
#cohort,Spain,2020-04-02,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,250,0
10-19,434,1
20-29,3590,6
30-39,6853,18
40-49,10551,49
50-59,12722,131
60-69,11657,373
70-79,11368,1176
80+,11752,2607
total,69177,4361
#cohort,Spain,2020-04-09,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,285,1
10-19,588,1
20-29,5381,11
30-39,10341,24
40-49,16088,61
50-59,19836,197
60-69,17713,597
70-79,16957,1773
80+,19258,4064
total,106447,6729
#cohort,Spain,2020-04-16,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,423,1
10-19,734,2
20-29,6763,19
30-39,12466,37
40-49,19536,116
50-59,24471,312
60-69,21249,958
70-79,20287,2868
80+,27153,6480
total,133082,10793
#cohort,Spain,2020-04-23,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,502,2
10-19,869,3
20-29,7962,25
30-39,14304,50
40-49,22430,138
50-59,27795,400
60-69,23595,1149
70-79,22470,3374
80+,32760,7937
total,152687,13078
#cohort,Spain,2020-04-28,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,660,2
10-19,1206,4
20-29,11138,22
30-39,18924,55
40-49,29629,172
50-59,36423,497
60-69,30361,1387
70-79,29550,4012
80+,46975,9702
total,204866,15853
#cohort,Spain,2020-05-07,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,765,2
10-19,1398,5
20-29,12321,21
30-39,20759,57
40-49,32239,185
50-59,39418,569
60-69,32226,1541
70-79,30861,4320
80+,50457,10760
total,220444,17460
#cohort,Spain,2020-05-14,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,871,2
10-19,1619,5
20-29,13439,23
30-39,22643,62
40-49,35175,201
50-59,42874,610
60-69,34380,1693
70-79,32395,4628
80+,55699,11931
total,239095,19115
#cohort,Spain,2020-05-29,spain
source: Ministerio de Sanidad / ISCIII COVID-19 report (citation key: spain)
band,cases,deaths
0-9,1123,3
10-19,2068,5
20-29,15272,24
30-39,24902,65
40-49,37970,218
50-59,45750,663
60-69,36355,1825
70-79,34294,4896
80+,61026,12886
total,258760,20585
)DATA";

inline constexpr std::string_view k_median_ages = R"DATA(#scalars,median_ages
source: World Factbook 2018 estimates; Italy per Eurostat 2018; China per UN World Population Prospects 2019; Diamond Princess mean age aboard per Russell et al. 2020
label,value
Argentina,31.7
China,38.4
Colombia,30
Diamond Princess,58
Italy,45.4
Netherlands,42.6
Portugal,42.2
South Africa,27.1
South Korea,41.8
Spain,42.7
Sweden,41.2
Switzerland,42.5
)DATA";

inline const std::vector<File>& files() {
    static const std::vector<File> all = {
        {"countries/argentina.csv", k_argentina},
        {"countries/china.csv", k_china},
        {"countries/colombia.csv", k_colombia},
        {"countries/diamond_princess.csv", k_diamond_princess},
        {"countries/italy.csv", k_italy},
        {"countries/netherlands.csv", k_netherlands},
        {"countries/portugal.csv", k_portugal},
        {"countries/south_africa.csv", k_south_africa},
        {"countries/south_korea.csv", k_south_korea},
        {"countries/spain.csv", k_spain},
        {"countries/sweden.csv", k_sweden},
        {"countries/switzerland.csv", k_switzerland},
        {"italy_march9.csv", k_italy_march9},
        {"china_00_variant.csv", k_china_00_variant},
        {"lombardy_pre.csv", k_lombardy_pre},
        {"lombardy_post.csv", k_lombardy_post},
        {"italy_series.csv", k_italy_series},
        {"spain_series.csv", k_spain_series},
        {"median_ages.csv", k_median_ages},
    };
    return all;
}

inline const std::vector<Dataset>& datasets() {
    static const std::vector<Dataset> all = {
        {"countries_latest",
         {"countries/argentina.csv", "countries/china.csv", "countries/colombia.csv",
          "countries/diamond_princess.csv", "countries/italy.csv", "countries/netherlands.csv",
          "countries/portugal.csv", "countries/south_africa.csv", "countries/south_korea.csv",
          "countries/spain.csv", "countries/sweden.csv", "countries/switzerland.csv"}},
        {"china_vs_italy_march9", {"countries/china.csv", "italy_march9.csv", "china_00_variant.csv"}},
        {"italy_series", {"italy_series.csv", "countries/china.csv"}},
        {"spain_series", {"spain_series.csv", "countries/china.csv"}},
        {"lombardy_ifr", {"lombardy_pre.csv", "lombardy_post.csv"}},
        {"median_ages", {"median_ages.csv"}},
    };
    return all;
}

} // namespace cfrmed::bundled
