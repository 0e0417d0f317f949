/* #ifdef CONFIG_GHOST */
#ifdef CONFIG_A
int a;
#endif
/* #endif */
