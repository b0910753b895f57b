#pragma once

// Published endpoint tables: (r, theta, alpha) after 25000 rounded Euler
// steps from (pi/2, a_j, pi), a_j = 0.5204 + j 0.004/15, grid 10^-10.

#include <array>
#include <string_view>

namespace rtm {

using EndpointRow = std::array<std::string_view, 3>;
using EndpointTable = std::array<EndpointRow, 16>;

// t = 0.3966, h = 0.3966/25000
inline constexpr EndpointTable kTableAt3966{{
    {"2644387103/2000000000", "488979583/625000000", "15734399013/10000000000"},
    {"1322132297/1000000000", "7825948977/10000000000", "15737174823/10000000000"},
    {"6610355281/5000000000", "7828224597/10000000000", "3934987681/2500000000"},
    {"3305024603/2500000000", "7830500241/10000000000", "15742726973/10000000000"},
    {"1652435797/1250000000", "7832775777/10000000000", "15745503261/10000000000"},
    {"13218874699/10000000000", "489690711/625000000", "7874139927/5000000000"},
    {"2643652613/2000000000", "3918663461/5000000000", "7875528331/5000000000"},
    {"13217651787/10000000000", "1567920511/2000000000", "1969229197/1250000000"},
    {"3304260153/2500000000", "1960469517/2500000000", "1575661087/1000000000"},
    {"13216429757/10000000000", "7844153569/10000000000", "630375529/400000000"},
    {"825988681/625000000", "7846429189/10000000000", "15762165867/10000000000"},
    {"412975267/312500000", "7848704599/10000000000", "1576494373/1000000000"},
    {"13214598143/10000000000", "1570196029/2000000000", "7883860961/5000000000"},
    {"6606994017/5000000000", "3926627829/5000000000", "15770500083/10000000000"},
    {"2642675617/2000000000", "7855531043/10000000000", "15773278497/10000000000"},
    {"13212768441/10000000000", "3928903267/5000000000", "7888028663/5000000000"},
}};

// t = 0.3991, h = 0.3991/25000
inline constexpr EndpointTable kTableAt3991{{
    {"13221985897/10000000000", "7849465573/10000000000", "625614391/400000000"},
    {"3305341587/2500000000", "7851741557/10000000000", "1564313037/1000000000"},
    {"13220747031/10000000000", "7854017679/10000000000", "7822950733/5000000000"},
    {"3305031973/2500000000", "7856293797/10000000000", "15648672607/10000000000"},
    {"13219508981/10000000000", "3929284889/5000000000", "15651443943/10000000000"},
    {"413090323/312500000", "1965211471/2500000000", "7827107803/5000000000"},
    {"6609135893/5000000000", "3931560893/5000000000", "978561719/625000000"},
    {"13217653441/10000000000", "491587361/625000000", "7829879799/5000000000"},
    {"1321703543/1000000000", "1966918439/2500000000", "15662531883/10000000000"},
    {"13216417529/10000000000", "9837437/12500000", "15665304353/10000000000"},
    {"660789997/500000000", "196805639/250000000", "15668077229/10000000000"},
    {"13215182437/10000000000", "1574900287/2000000000", "3134170029/2000000000"},
    {"6607282587/5000000000", "7876777299/10000000000", "15673623461/10000000000"},
    {"13213948101/10000000000", "3939526607/5000000000", "7838198359/5000000000"},
    {"3303332839/2500000000", "1576265811/2000000000", "7839585261/5000000000"},
    {"13212714809/10000000000", "3941802431/5000000000", "15681944331/10000000000"},
}};

}  // namespace rtm
