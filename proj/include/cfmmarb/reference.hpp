#pragma once

// Published reference values used by the validation harness: the efficient
// frontier table at sigma = 5%/day, 12 s blocks (rates in bp/day of pool
// value, stdev in bp), and the probability-of-trade grid in percent.

#include <array>

namespace cfmmarb::reference {

struct FrontierRow {
  double gamma_bp, arb, stdev, ptr, lvrptr, lvr, pcterror;
};

inline constexpr std::array<FrontierRow, 109> kFrontier{{
    {0.01, 3.117518092, 5.892564982, 0.997605746, 3.117517957, 3.125, 4.34029E-08},
    {1, 2.520161403, 5.966002846, 0.806451613, 2.52016129, 3.125, 4.46528E-08},
    {2, 2.111486589, 6.152833279, 0.675675676, 2.111486486, 3.125, 4.84028E-08},
    {3, 1.816860564, 6.419547828, 0.581395349, 1.816860465, 3.125, 5.46528E-08},
    {4, 1.594387856, 6.745200696, 0.510204082, 1.594387755, 3.125, 6.34028E-08},
    {5, 1.420454651, 7.115568363, 0.454545455, 1.420454545, 3.125, 7.46528E-08},
    {6, 1.280737818, 7.520524436, 0.409836066, 1.280737705, 3.125, 8.84028E-08},
    {7, 1.166044898, 7.952648004, 0.373134328, 1.166044776, 3.125, 1.04653E-07},
    {8, 1.070205612, 8.406392074, 0.342465753, 1.070205479, 3.125, 1.23403E-07},
    {9, 0.988924194, 8.877546385, 0.316455696, 0.988924051, 3.125, 1.44653E-07},
    {10, 0.919117802, 9.362873421, 0.294117647, 0.919117647, 3.125, 1.68403E-07},
    {11, 0.858516651, 9.859854346, 0.274725275, 0.858516484, 3.125, 1.94653E-07},
    {12, 0.805412551, 10.3665081, 0.257731959, 0.805412371, 3.125, 2.23403E-07},
    {13, 0.758495339, 10.88126067, 0.242718447, 0.758495146, 3.125, 2.54653E-07},
    {14, 0.716743326, 11.4028494, 0.229357798, 0.716743119, 3.125, 2.88403E-07},
    {15, 0.679348047, 11.93025221, 0.217391304, 0.679347826, 3.125, 3.24653E-07},
    {16, 0.645661392, 12.4626347, 0.20661157, 0.645661157, 3.125, 3.63403E-07},
    {17, 0.615157729, 12.99931016, 0.196850394, 0.61515748, 3.125, 4.04653E-07},
    {18, 0.587406278, 13.53970923, 0.187969925, 0.587406015, 3.125, 4.48403E-07},
    {19, 0.562050638, 14.08335639, 0.179856115, 0.56205036, 3.125, 4.94653E-07},
    {20, 0.538793396, 14.62985191, 0.172413793, 0.538793103, 3.125, 5.43403E-07},
    {21, 0.517384414, 15.17885763, 0.165562914, 0.517384106, 3.125, 5.94653E-07},
    {22, 0.497611788, 15.73008576, 0.159235669, 0.497611465, 3.125, 6.48402E-07},
    {23, 0.479294816, 16.28329006, 0.153374233, 0.479294479, 3.125, 7.04652E-07},
    {24, 0.462278459, 16.8382587, 0.147928994, 0.462278107, 3.125, 7.63402E-07},
    {25, 0.44642894, 17.39480857, 0.142857143, 0.446428571, 3.125, 8.24652E-07},
    {26, 0.431630218, 17.95278064, 0.138121547, 0.431629834, 3.125, 8.88402E-07},
    {27, 0.417781147, 18.5120362, 0.13368984, 0.417780749, 3.125, 9.54652E-07},
    {28, 0.40479316, 19.07245374, 0.129533679, 0.404792746, 3.125, 1.0234E-06},
    {29, 0.392588369, 19.63392641, 0.125628141, 0.39258794, 3.125, 1.09465E-06},
    {30, 0.381098006, 20.19635992, 0.12195122, 0.381097561, 3.125, 1.1684E-06},
    {31, 0.370261124, 20.75967072, 0.118483412, 0.370260664, 3.125, 1.24465E-06},
    {32, 0.360023518, 21.32378459, 0.115207373, 0.360023041, 3.125, 1.3234E-06},
    {33, 0.350336815, 21.88863533, 0.112107623, 0.350336323, 3.125, 1.40465E-06},
    {34, 0.341157713, 22.45416378, 0.109170306, 0.341157205, 3.125, 1.4884E-06},
    {35, 0.332447332, 23.02031686, 0.106382979, 0.332446809, 3.125, 1.57465E-06},
    {36, 0.324170664, 23.58704683, 0.10373444, 0.324170124, 3.125, 1.6634E-06},
    {37, 0.316296102, 24.15431068, 0.101214575, 0.316295547, 3.125, 1.75465E-06},
    {38, 0.308795037, 24.7220695, 0.098814229, 0.308794466, 3.125, 1.8484E-06},
    {39, 0.301641513, 25.29028806, 0.096525097, 0.301640927, 3.125, 1.94465E-06},
    {40, 0.294811923, 25.85893436, 0.094339623, 0.294811321, 3.125, 2.0434E-06},
    {41, 0.288284751, 26.42797929, 0.092250923, 0.288284133, 3.125, 2.14465E-06},
    {42, 0.282040345, 26.99739629, 0.090252708, 0.282039711, 3.125, 2.2484E-06},
    {43, 0.276060721, 27.56716109, 0.088339223, 0.276060071, 3.125, 2.35465E-06},
    {44, 0.270329386, 28.13725149, 0.08650519, 0.27032872, 3.125, 2.4634E-06},
    {45, 0.26483119, 28.7076471, 0.084745763, 0.264830508, 3.125, 2.57465E-06},
    {46, 0.259552193, 29.27832921, 0.083056478, 0.259551495, 3.125, 2.6884E-06},
    {47, 0.254479541, 29.84928058, 0.081433225, 0.254478827, 3.125, 2.80465E-06},
    {48, 0.249601369, 30.42048534, 0.079872204, 0.249600639, 3.125, 2.9234E-06},
    {49, 0.244906702, 30.99192882, 0.078369906, 0.244905956, 3.125, 3.04465E-06},
    {50, 0.240385377, 31.56359745, 0.076923077, 0.240384615, 3.125, 3.16839E-06},
    {51, 0.236027968, 32.13547867, 0.075528701, 0.23602719, 3.125, 3.29464E-06},
    {52, 0.231825719, 32.70756085, 0.074183976, 0.231824926, 3.125, 3.42339E-06},
    {53, 0.227770489, 33.27983316, 0.072886297, 0.227769679, 3.125, 3.55464E-06},
    {54, 0.223854694, 33.85228554, 0.071633238, 0.223853868, 3.125, 3.68839E-06},
    {55, 0.220071264, 34.42490864, 0.070422535, 0.220070423, 3.125, 3.82464E-06},
    {56, 0.2164136, 34.99769372, 0.069252078, 0.216412742, 3.125, 3.96339E-06},
    {57, 0.212875533, 35.57063264, 0.068119891, 0.212874659, 3.125, 4.10464E-06},
    {58, 0.209451292, 36.14371778, 0.067024129, 0.209450402, 3.125, 4.24839E-06},
    {59, 0.206135471, 36.71694203, 0.065963061, 0.206134565, 3.125, 4.39464E-06},
    {60, 0.202923, 37.29029871, 0.064935065, 0.202922078, 3.125, 4.54339E-06},
    {61, 0.199809122, 37.86378159, 0.063938619, 0.199808184, 3.125, 4.69463E-06},
    {62, 0.196789367, 38.43738479, 0.062972292, 0.196788413, 3.125, 4.84838E-06},
    {63, 0.193859531, 39.01110281, 0.062034739, 0.193858561, 3.125, 5.00463E-06},
    {64, 0.191015656, 39.58493048, 0.061124694, 0.19101467, 3.125, 5.16338E-06},
    {65, 0.188254014, 40.15886291, 0.060240964, 0.188253012, 3.125, 5.32463E-06},
    {66, 0.18557109, 40.73289553, 0.059382423, 0.185570071, 3.125, 5.48838E-06},
    {67, 0.182963564, 41.307024, 0.058548009, 0.182962529, 3.125, 5.65463E-06},
    {68, 0.180428302, 41.88124424, 0.057736721, 0.180427252, 3.125, 5.82337E-06},
    {69, 0.177962342, 42.45555241, 0.056947608, 0.177961276, 3.125, 5.99462E-06},
    {70, 0.175562881, 43.02994486, 0.056179775, 0.175561798, 3.125, 6.16837E-06},
    {71, 0.173227263, 43.60441815, 0.055432373, 0.173226164, 3.125, 6.34462E-06},
    {72, 0.170952975, 44.17896901, 0.054704595, 0.17095186, 3.125, 6.52337E-06},
    {73, 0.168737632, 44.75359437, 0.05399568, 0.168736501, 3.125, 6.70462E-06},
    {74, 0.166578973, 45.3282913, 0.053304904, 0.166577825, 3.125, 6.88836E-06},
    {75, 0.164474848, 45.90305701, 0.052631579, 0.164473684, 3.125, 7.07461E-06},
    {76, 0.162423217, 46.47788889, 0.051975052, 0.162422037, 3.125, 7.26336E-06},
    {77, 0.16042214, 47.05278442, 0.051334702, 0.160420945, 3.125, 7.45461E-06},
    {78, 0.158469772, 47.62774124, 0.050709939, 0.15846856, 3.125, 7.64835E-06},
    {79, 0.156564354, 48.20275707, 0.0501002, 0.156563126, 3.125, 7.8446E-06},
    {80, 0.154704215, 48.77782978, 0.04950495, 0.15470297, 3.125, 8.04335E-06},
    {81, 0.152887758, 49.3529573, 0.048923679, 0.152886497, 3.125, 8.2446E-06},
    {82, 0.151113462, 49.9281377, 0.048355899, 0.151112186, 3.125, 8.44834E-06},
    {83, 0.149379878, 50.50336911, 0.047801147, 0.149378585, 3.125, 8.65459E-06},
    {84, 0.147685619, 51.07864975, 0.047258979, 0.14768431, 3.125, 8.86334E-06},
    {85, 0.146029363, 51.65397794, 0.046728972, 0.146028037, 3.125, 9.07458E-06},
    {86, 0.144409844, 52.22935206, 0.046210721, 0.144408503, 3.125, 9.28833E-06},
    {87, 0.142825855, 52.80477057, 0.045703839, 0.142824497, 3.125, 9.50458E-06},
    {88, 0.141276238, 53.38023198, 0.045207957, 0.141274864, 3.125, 9.72332E-06},
    {89, 0.139759887, 53.95573489, 0.044722719, 0.139758497, 3.125, 9.94457E-06},
    {90, 0.138275742, 54.53127795, 0.044247788, 0.138274336, 3.125, 1.01683E-05},
    {91, 0.136822788, 55.10685987, 0.043782837, 0.136821366, 3.125, 1.03946E-05},
    {92, 0.135400052, 55.68247941, 0.043327556, 0.135398614, 3.125, 1.06233E-05},
    {93, 0.1340066, 56.25813538, 0.042881647, 0.134005146, 3.125, 1.08546E-05},
    {94, 0.132641539, 56.83382665, 0.042444822, 0.132640068, 3.125, 1.10883E-05},
    {95, 0.131304008, 57.40955213, 0.042016807, 0.131302521, 3.125, 1.13245E-05},
    {96, 0.129993184, 57.98531077, 0.041597338, 0.129991681, 3.125, 1.15633E-05},
    {97, 0.128708274, 58.56110157, 0.041186161, 0.128706755, 3.125, 1.18045E-05},
    {98, 0.127448518, 59.13692357, 0.040783034, 0.127446982, 3.125, 1.20483E-05},
    {99, 0.126213183, 59.71277584, 0.040387722, 0.126211632, 3.125, 1.22945E-05},
    {100, 0.125001568, 60.28865749, 0.04, 0.125, 3.125, 1.25433E-05},
    {110, 0.114052825, 66.04891709, 0.03649635, 0.114051095, 3.125, 1.51682E-05},
    {120, 0.104867664, 71.8113492, 0.033557047, 0.104865772, 3.125, 1.80431E-05},
    {130, 0.097051744, 77.57546027, 0.031055901, 0.097049689, 3.125, 2.1168E-05},
    {140, 0.090320136, 83.34089561, 0.028901734, 0.090317919, 3.125, 2.45429E-05},
    {150, 0.084461839, 89.10739379, 0.027027027, 0.084459459, 3.125, 2.81677E-05},
    {160, 0.079317262, 94.87475789, 0.025380711, 0.079314721, 3.125, 3.20425E-05},
    {170, 0.07476347, 100.6428368, 0.023923445, 0.074760766, 3.125, 3.61673E-05},
    {180, 0.070704224, 106.4115126, 0.022624434, 0.070701357, 3.125, 4.0542E-05},
}};

inline constexpr double kFrontierSigma = 0.05;
inline constexpr double kFrontierBlockTime = 12.0;

inline constexpr std::array<double, 5> kTradeTableBlockTimes{600.0, 120.0, 12.0, 2.0, 0.05};
inline constexpr std::array<double, 5> kTradeTableFeesBp{1.0, 5.0, 10.0, 30.0, 100.0};
inline constexpr double kTradeTablePercent[5][5] = {
    {96.7, 85.5, 74.7, 49.6, 22.8},
    {92.9, 72.5, 56.9, 30.5, 11.6},
    {80.7, 45.6, 29.5, 12.3, 4.0},
    {63.0, 25.4, 14.5, 5.4, 1.7},
    {21.2, 5.1, 2.6, 0.9, 0.3},
};

}  // namespace cfmmarb::reference
