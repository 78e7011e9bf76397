#include "dkp/cli/commands.hpp"

namespace dkp::cli {

// Verbatim, ten significant digits.
double const kTable2[2][6][6] = {
    {
        {-871.4020165, -923.6139661, -931.4867386, -934.1933978, -935.4372396, -936.1084061},
        {-922.1585762, -931.4201148, -934.1816502, -935.4339333, -936.1071998, -936.5088793},
        {-930.9974392, -934.1535673, -935.4279337, -936.1052972, -936.5081276, -936.7655234},
        {-933.9779358, -935.4136146, -936.1018465, -936.5069413, -936.7650274, -936.9380488},
        {-935.3248226, -936.0936195, -936.5047911, -936.7642455, -936.9377089, -937.0579382},
        {-936.0428896, -936.4996693, -936.7628287, -936.9371726, -937.0576990, -937.1430640},
    },
    {
        {-870.7176063, -922.9223014, -930.7744718, -933.4522010, -934.6588482, -935.2845563},
        {-921.4679150, -930.7082258, -933.4406736, -934.6556955, -935.2834677, -935.6314014},
        {-930.2877285, -933.4131126, -934.6499738, -935.2817504, -935.6307868, -935.8261476},
        {-933.2405413, -934.6363132, -935.2786346, -935.6298173, -935.8258091, -935.9285043},
        {-934.5514102, -935.2712010, -935.6280589, -935.8252750, -935.9283417, -935.9699520},
        {-935.2251697, -935.6238636, -935.8243063, -935.9280848, -935.9699094, -935.2845563},
    },
};

bool table2_suspect(unsigned column, unsigned n, unsigned J)
{
    return column == 1 && n == 5 && J == 5;
}

} // namespace dkp::cli
