#include "proto.h"

#ifdef CONFIG_UDP
int udp_open(void) { return 0; }
#endif

#ifndef CONFIG_TCP
int udp_default_transport = 1;
#endif
