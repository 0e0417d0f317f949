#include "util.h"

int main(void)
{
#ifdef CONFIG_DEBUG
    log_level = 3;
#ifdef CONFIG_NET
    net_trace = 1;
#endif
#endif
    return boot();
}
